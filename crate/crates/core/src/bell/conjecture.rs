//! The conjectured Bell-polynomial identity that closes the γ system for `l ≥ 0`.
//!
//! With `N = Σ n_i`, `M = Σ i·n_i` and `S = N − M − l − 4`, both sides are
//! polynomials in `x₁..x_S`. All sums run over the range where the Bell
//! polynomials and reciprocal factorials are non-trivial.

use alloc::vec::Vec;
use num_traits::Zero;

use super::{dfact_q, fact_q, inv_fact_q, symbolic_vars, BellTable};
use crate::exact::{binomial, rat_frac, MPoly, Rational};
use crate::{Error, Result};

/// Which form of the identity to build. The perturbed forms exist so that
/// tests can confirm the checker actually rejects wrong identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConjectureVariant {
    Faithful,
    /// The right-hand factorials `(N−2+K)!` and `(N′−2+K′)!` both replaced by `(N−1+K)!`.
    ShiftedRhsFactorial,
}

struct Ctx {
    arity: usize,
    table: BellTable<MPoly>,
}

impl Ctx {
    /// `Σ_K (a+K)! B_{s,K}(x) / s!`, zero when `s < 0`.
    fn tower(&self, a: i64, s: i64) -> Result<MPoly> {
        let mut acc = MPoly::zero(self.arity);
        if s < 0 {
            return Ok(acc);
        }
        let inv = inv_fact_q(s);
        for k in 0..=s {
            let b = self.table.get(s, k)?;
            if b.is_zero() {
                continue;
            }
            if a + k < 0 {
                return Err(Error::Inconsistency(alloc::format!(
                    "non-trivial Bell term meets ({})! in the conjectured identity",
                    a + k
                )));
            }
            acc = acc + b.scale(&(fact_q(a + k) * &inv));
        }
        Ok(acc)
    }
}

/// Left and right side of the identity for `l` and multiplicities `n₀..n_p`.
pub fn conjecture_sides(l: i64, counts: &[u32], variant: ConjectureVariant) -> Result<(MPoly, MPoly)> {
    if l < 0 {
        return Err(Error::input("l must be non-negative"));
    }
    if counts.iter().all(|&n| n == 0) {
        return Err(Error::input("at least one multiplicity must be positive"));
    }
    let n: i64 = counts.iter().map(|&c| c as i64).sum();
    let m: i64 = counts.iter().enumerate().map(|(i, &c)| i as i64 * c as i64).sum();
    let s = n - m - l - 4;
    let arity = s.max(1) as usize;
    let ctx = Ctx { arity, table: BellTable::new(symbolic_vars(arity), s.max(0) as usize, &MPoly::zero(arity)) };
    let xs = symbolic_vars(arity);

    let mut weight = Rational::zero();
    for (i, &ni) in counts.iter().enumerate() {
        let i = i as i64;
        weight += Rational::from_integer((ni as i64).into())
            * dfact_q(2 * l + 2 * i + 3)
            * Rational::from_integer((2 * i + 1).into())
            * fact_q(i)
            / dfact_q(2 * i + 1)
            * inv_fact_q(l + i + 1);
    }
    let lhs1 = ctx.tower(n - 2, s)?.scale(&(dfact_q(2 * l + 5) * inv_fact_q(l + 2)));
    let lhs2 = ctx.tower(n - 3, s)?.scale(&weight);
    let lhs = lhs1 - lhs2;

    let mut rhs = MPoly::zero(arity);
    let shifted = variant == ConjectureVariant::ShiftedRhsFactorial;
    for j in 1..=s.max(0) {
        let c = dfact_q(2 * j + 2 * l + 5) * fact_q(j + 1) / dfact_q(2 * j + 1) * inv_fact_q(j + l + 2) * inv_fact_q(j);
        let t = ctx.tower(if shifted { n - 1 } else { n - 2 }, s - j)?;
        if t.is_zero() {
            continue;
        }
        rhs = rhs + (&xs[j as usize - 1] * &t).scale(&c);
    }

    let half = rat_frac(1, 2);
    let mut sub = alloc::vec![0u32; counts.len()];
    loop {
        let n1: i64 = sub.iter().map(|&c| c as i64).sum();
        let m1: i64 = sub.iter().enumerate().map(|(i, &c)| i as i64 * c as i64).sum();
        let mult = counts
            .iter()
            .zip(&sub)
            .fold(num_bigint::BigInt::from(1), |acc, (&a, &b)| acc * binomial(a as i64, b as i64));
        for l1 in 0..=l {
            let l2 = l - l1;
            let (s1, s2) = (n1 - m1 - l1 - 2, (n - n1) - (m - m1) - l2 - 2);
            if s1 < 0 || s2 < 0 {
                continue;
            }
            let t1 = ctx.tower(if shifted { n - 1 } else { n1 - 2 }, s1)?;
            if t1.is_zero() {
                continue;
            }
            let t2 = ctx.tower(n - n1 - 2, s2)?;
            if t2.is_zero() {
                continue;
            }
            let c = dfact_q(2 * l1 + 1)
                * dfact_q(2 * l2 + 1)
                * inv_fact_q(l1)
                * inv_fact_q(l2)
                * Rational::from_integer(mult.clone())
                * &half;
            rhs = rhs + (&t1 * &t2).scale(&c);
        }
        if !advance(&mut sub, counts) {
            break;
        }
    }
    Ok((lhs, rhs))
}

// Odometer over 0 ≤ sub[i] ≤ max[i].
pub(super) fn advance(sub: &mut [u32], max: &[u32]) -> bool {
    for (s, &m) in sub.iter_mut().zip(max) {
        if *s < m {
            *s += 1;
            return true;
        }
        *s = 0;
    }
    false
}

/// True iff the identity holds exactly for these parameters.
pub fn verify_conjecture(l: i64, counts: &[u32]) -> Result<bool> {
    let (lhs, rhs) = conjecture_sides(l, counts, ConjectureVariant::Faithful)?;
    Ok(lhs == rhs)
}

/// All multiplicity tuples `n₀..n_p` with entries in `0..=max_n` and at least one positive.
pub fn count_tuples(p: usize, max_n: u32) -> Vec<Vec<u32>> {
    let max = alloc::vec![max_n; p + 1];
    let mut cur = alloc::vec![0u32; p + 1];
    let mut out = Vec::new();
    while advance(&mut cur, &max) {
        out.push(cur.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_zero_slots() {
        assert!(verify_conjecture(0, &[4]).unwrap());
    }

    #[test]
    fn mixed_slots_l2() {
        assert!(verify_conjecture(2, &[2, 1]).unwrap());
    }

    #[test]
    fn shifted_factorial_is_rejected() {
        for counts in [&[4u32][..], &[5], &[6, 1]] {
            let (lhs, rhs) = conjecture_sides(0, counts, ConjectureVariant::ShiftedRhsFactorial).unwrap();
            assert_ne!(lhs, rhs, "{counts:?}");
        }
    }

    #[test]
    fn empty_range_gives_zero_on_both_sides() {
        let (lhs, rhs) = conjecture_sides(1, &[1, 1], ConjectureVariant::Faithful).unwrap();
        assert!(lhs.is_zero() && rhs.is_zero());
    }

    #[test]
    fn tuples_skip_all_zero() {
        let t = count_tuples(1, 1);
        assert_eq!(t.len(), 3);
    }
}
