//! Exact success probability of the entangled-resource decoder.
//!
//! Every amplitude of `<x,n|<y,m| (|±> ⊗ |Psi>)` is an integer sum times
//! `1 / sqrt(2 (N+1) 2^k)`, where `k` counts the two-term basis vectors in
//! the outcome. Squaring gives a rational probability, so the whole
//! computation runs over integers with no floating point.

use num_rational::Ratio;

use crate::states::HidingBit;

/// Local basis state `(hiding occupation, resource occupation)`.
type LocalKet = (usize, usize);

struct IntegerVector {
    /// Value assigned by the parity rule.
    value: u8,
    support: Vec<(LocalKet, i64)>,
}

fn integer_pm_basis(n_total: usize) -> Vec<IntegerVector> {
    let mut out = vec![
        IntegerVector {
            value: 0,
            support: vec![((0, 0), 1)],
        },
        IntegerVector {
            value: 1,
            support: vec![((1, n_total), 1)],
        },
    ];
    for n in 1..=n_total {
        for (value, sign) in [(0, 1), (1, -1)] {
            out.push(IntegerVector {
                value,
                support: vec![((0, n), 1), ((1, n - 1), sign)],
            });
        }
    }
    out
}

fn coefficient(v: &IntegerVector, ket: LocalKet) -> i64 {
    v.support.iter().find(|(k, _)| *k == ket).map_or(0, |(_, c)| *c)
}

/// Exact probability that the parity rule recovers `bit` with resource size `N`.
pub fn entangled_success_exact(bit: HidingBit, n_total: usize) -> Ratio<i64> {
    let sign: i64 = match bit {
        HidingBit::Zero => 1,
        HidingBit::One => -1,
    };
    // (alice ket, bob ket, integer coefficient); common factor 1/sqrt(2(N+1))
    let mut terms: Vec<(LocalKet, LocalKet, i64)> = Vec::new();
    for r in 0..=n_total {
        terms.push(((0, r), (1, n_total - r), 1));
        terms.push(((1, r), (0, n_total - r), sign));
    }
    let basis = integer_pm_basis(n_total);
    let base = 2 * (n_total as i64 + 1);
    let mut success = Ratio::from_integer(0);
    for a in &basis {
        for b in &basis {
            if (a.value ^ b.value) != bit.value() {
                continue;
            }
            let amp: i64 = terms
                .iter()
                .map(|&(ka, kb, c)| coefficient(a, ka) * coefficient(b, kb) * c)
                .sum();
            if amp == 0 {
                continue;
            }
            let k = (a.support.len() - 1) + (b.support.len() - 1);
            success += Ratio::new(amp * amp, base << k);
        }
    }
    success
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(entangled_success_exact(HidingBit::Zero, 1), Ratio::new(1, 2));
        assert_eq!(entangled_success_exact(HidingBit::Zero, 3), Ratio::new(3, 4));
        // Every outcome of the odd state has different assignments.
        assert_eq!(entangled_success_exact(HidingBit::One, 3), Ratio::from_integer(1));
    }
}
