use crate::channels::dephase;
use crate::fock::{PartyPartition, StateVector};
use crate::states::{multiparty_hiding_state, HidingBit};
use crate::{Error, Result, DENSE_DIMENSION_LIMIT};

/// Dephasing comparison for one coalition versus the rest.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartitionCheck {
    pub coalition: Vec<String>,
    pub max_abs_diff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultipartyReport {
    pub parties: usize,
    pub checks: Vec<BipartitionCheck>,
}

impl MultipartyReport {
    pub fn worst_gap(&self) -> f64 {
        self.checks.iter().map(|c| c.max_abs_diff).fold(0.0, f64::max)
    }

    pub fn secure(&self, tol: f64) -> bool {
        self.worst_gap() <= tol
    }
}

/// Every split of the parties into a coalition (containing party 1) and its
/// nonempty complement: `2^(P-1) - 1` bipartitions.
pub fn coalitions(parties: &[String]) -> Vec<Vec<String>> {
    let p = parties.len();
    (0..(1usize << (p - 1)) - 1)
        .map(|mask| {
            std::iter::once(parties[0].clone())
                .chain((1..p).filter(|k| mask & (1 << (k - 1)) != 0).map(|k| parties[k].clone()))
                .collect()
        })
        .collect()
}

/// For every bipartition of the `P`-party hiding state, compares the
/// dephased states of both bit values.
pub fn multiparty_security_check(parties: usize) -> Result<MultipartyReport> {
    let plus = multiparty_hiding_state(HidingBit::Zero, parties)?;
    let minus = multiparty_hiding_state(HidingBit::One, parties)?;
    let d = plus.space().dimension();
    if d > DENSE_DIMENSION_LIMIT {
        return Err(Error::TooLarge {
            dimension: d,
            limit: DENSE_DIMENSION_LIMIT,
        });
    }
    let base = PartyPartition::from_space(plus.space());
    let (rp, rm) = (plus.to_density(), minus.to_density());
    let checks = coalitions(&base.parties())
        .into_iter()
        .map(|coalition| {
            let split = base.grouped(|p| {
                if coalition.iter().any(|c| c == p) {
                    "coalition".to_string()
                } else {
                    "rest".to_string()
                }
            });
            let gap = dephase(&rp, &split)?.max_abs_diff(&dephase(&rm, &split)?)?;
            Ok(BipartitionCheck {
                coalition,
                max_abs_diff: gap,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MultipartyReport { parties, checks })
}

/// Convenience for callers holding an arbitrary multiparty pure state pair.
pub fn coalition_gap(plus: &StateVector, minus: &StateVector, split: &PartyPartition) -> Result<f64> {
    dephase(&plus.to_density(), split)?.max_abs_diff(&dephase(&minus.to_density(), split)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bipartition_counts() {
        for (p, count) in [(2, 1), (3, 3), (4, 7)] {
            let report = multiparty_security_check(p).unwrap();
            assert_eq!(report.checks.len(), count);
            assert!(report.secure(1e-12));
        }
    }

    #[test]
    fn undivided_parties_can_read() {
        let plus = multiparty_hiding_state(HidingBit::Zero, 3).unwrap();
        let minus = multiparty_hiding_state(HidingBit::One, 3).unwrap();
        let all = PartyPartition::single(plus.space(), "everyone");
        assert!((coalition_gap(&plus, &minus, &all).unwrap() - 1.0).abs() < 1e-15);
    }
}
