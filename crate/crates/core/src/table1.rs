//! Published block-maxima means for nine stock indexes grouped into three markets
//! (monthly maxima of negative log-returns, January 1993 to March 2004).
//!
//! Blocks: Europe (CAC 40, FTSE 100, SMI, XDAX), USA (Dow Jones, Nasdaq, S&P 500) and
//! Far East (HSI, Nikkei). The underlying price series are not bundled; only the seven
//! subset means are, which is enough to rebuild every coefficient estimate.

use serde::Serialize;

use crate::coefficients::restrict_terms;
use crate::error::Result;
use crate::estimate::r_hat_from_m_bar;

pub const GROUPS: [&str; 3] = ["Europe", "USA", "Far East"];

/// Subset means indexed by block mask (bit 0 Europe, bit 1 USA, bit 2 Far East).
pub const M_BAR_BY_MASK: [f64; 8] = [
    0.0,
    0.691736695, // Europe
    0.614005602, // USA
    0.738655462, // Europe + USA
    0.625910364, // Far East
    0.770028011, // Europe + Far East
    0.743557423, // USA + Far East
    0.80070028,  // all
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Estimate {
    pub groups: Vec<String>,
    #[serde(rename = "R")]
    pub r_hat: f64,
    /// Value reported with the published table, to three decimals.
    pub published: f64,
}

/// The three-market estimate followed by the three pairwise ones.
pub fn estimates() -> Result<Vec<Table1Estimate>> {
    let cases: [(&[usize], f64); 4] = [
        (&[0, 1, 2], 0.321),
        (&[0, 1], 0.172),
        (&[0, 2], 0.222),
        (&[1, 2], 0.247),
    ];
    cases
        .iter()
        .map(|(keep, published)| {
            let terms = restrict_terms(&M_BAR_BY_MASK, keep);
            Ok(Table1Estimate {
                groups: keep.iter().map(|&j| GROUPS[j].to_string()).collect(),
                r_hat: r_hat_from_m_bar(&terms, keep.len())?,
                published: *published,
            })
        })
        .collect()
}
