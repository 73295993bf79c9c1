use std::fmt;
use std::sync::Arc;

use super::{CentralElement, GroupAlgebra};
use crate::error::{Error, Result};
use crate::fitting::{default_whitehead, CentralLattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum UnitVerdict {
    #[serde(rename = "exact-pass")]
    ExactPass,
    #[serde(rename = "necessary-pass")]
    NecessaryPass,
    #[serde(rename = "fail")]
    Fail,
}

impl UnitVerdict {
    pub fn passed(self) -> bool {
        self != UnitVerdict::Fail
    }
}

impl fmt::Display for UnitVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnitVerdict::ExactPass => "exact-pass",
            UnitVerdict::NecessaryPass => "necessary-pass",
            UnitVerdict::Fail => "fail",
        })
    }
}

/// Whether u is (abelian G) or could be (otherwise) a unit of the p-local group ring centre.
pub fn unit_reduced_norm_test(
    ga: &Arc<GroupAlgebra>,
    u: &CentralElement,
    p: u64,
) -> Result<UnitVerdict> {
    unit_test_against(ga, u, p, None)
}

/// As `unit_reduced_norm_test`, against a supplied Whitehead estimate for nonabelian G.
pub fn unit_test_against(
    ga: &Arc<GroupAlgebra>,
    u: &CentralElement,
    p: u64,
    xi: Option<&CentralLattice>,
) -> Result<UnitVerdict> {
    let inv = u
        .inv()
        .map_err(|_| Error::NotAUnit("a component vanishes".into()))?;
    if ga.is_abelian() {
        let ok = ga.to_group_ring(u).is_p_integral(p) && ga.to_group_ring(&inv).is_p_integral(p);
        return Ok(if ok {
            UnitVerdict::ExactPass
        } else {
            UnitVerdict::Fail
        });
    }
    let local_units = u
        .comps()
        .iter()
        .zip(inv.comps())
        .all(|(a, b)| a.p_content(p).is_integral() && b.p_content(p).is_integral());
    if !local_units {
        return Ok(UnitVerdict::Fail);
    }
    let owned;
    let xi = match xi {
        Some(x) => x,
        None => {
            owned = default_whitehead(ga, p);
            &owned
        }
    };
    Ok(if xi.contains(u) && xi.contains(&inv) {
        UnitVerdict::NecessaryPass
    } else {
        UnitVerdict::Fail
    })
}
