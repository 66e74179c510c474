//! A second closed Bell-type identity with no indeterminates, checked in exact rationals.
//!
//! For `m ≥ 0` and multiplicities `n₂..n_p`, with `J = Σ j n_j` and
//! `J₁ = Σ (j−1) n_j` (and primed versions for sub-multiplicities):
//!
//! ```text
//! Σ_{n'+n''=n} Σ_{k'+k''=m} (2k'+1)!!(2k''+1)!! (k'+J')! (k''+J'')!
//!                         / (k'! k''! (2+k'+J₁')! (2+k''+J₁'')!) · Π C(n_j, n_j')
//!   = 2 (m+1+J)! / (m+4+J₁)! · { (2m+3)!!/m!
//!       + Σ_j n_j ( (2m+3)!!/(m+2)! · ((m+3)j+m+2) − j!(2j+2m+3)!!/((j+m+1)!(2j−1)!!) ) }
//! ```

use num_traits::Zero;

use super::{dfact_q, fact_q, inv_fact_q};
use crate::exact::{binomial, rat, Rational};
use crate::{Error, Result};

/// Both sides; `counts[i]` is the multiplicity `n_{i+2}`.
pub fn footnote_sides(m: i64, counts: &[u32]) -> Result<(Rational, Rational)> {
    if m < 0 {
        return Err(Error::input("m must be non-negative"));
    }
    let weight = |sub: &[u32]| -> (i64, i64) {
        sub.iter().enumerate().fold((0, 0), |(a, b), (i, &c)| {
            let j = i as i64 + 2;
            (a + j * c as i64, b + (j - 1) * c as i64)
        })
    };

    let mut lhs = Rational::zero();
    let mut sub = alloc::vec![0u32; counts.len()];
    loop {
        let rest: alloc::vec::Vec<u32> = counts.iter().zip(&sub).map(|(a, b)| a - b).collect();
        let (j1, jj1) = weight(&sub);
        let (j2, jj2) = weight(&rest);
        let mult = counts
            .iter()
            .zip(&sub)
            .fold(num_bigint::BigInt::from(1), |acc, (&a, &b)| acc * binomial(a as i64, b as i64));
        for k1 in 0..=m {
            let k2 = m - k1;
            lhs += dfact_q(2 * k1 + 1)
                * dfact_q(2 * k2 + 1)
                * fact_q(k1 + j1)
                * fact_q(k2 + j2)
                * inv_fact_q(k1)
                * inv_fact_q(k2)
                * inv_fact_q(2 + k1 + jj1)
                * inv_fact_q(2 + k2 + jj2)
                * Rational::from_integer(mult.clone());
        }
        if !super::conjecture::advance(&mut sub, counts) {
            break;
        }
    }

    let (j, jj) = weight(counts);
    let mut brace = dfact_q(2 * m + 3) * inv_fact_q(m);
    for (i, &nj) in counts.iter().enumerate() {
        let jv = i as i64 + 2;
        let a = dfact_q(2 * m + 3) * inv_fact_q(m + 2) * rat((m + 3) * jv + m + 2);
        let b = fact_q(jv) * dfact_q(2 * jv + 2 * m + 3) * inv_fact_q(jv + m + 1) / dfact_q(2 * jv - 1);
        brace += rat(nj as i64) * (a - b);
    }
    let rhs = rat(2) * fact_q(m + 1 + j) * inv_fact_q(m + 4 + jj) * brace;
    Ok((lhs, rhs))
}

pub fn verify_footnote_identity(m: i64, counts: &[u32]) -> Result<bool> {
    let (lhs, rhs) = footnote_sides(m, counts)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_frac;

    #[test]
    fn empty_case_is_one_quarter() {
        let (lhs, rhs) = footnote_sides(0, &[]).unwrap();
        assert_eq!(lhs, rat_frac(1, 4));
        assert_eq!(rhs, rat_frac(1, 4));
    }

    #[test]
    fn small_cases() {
        assert!(verify_footnote_identity(2, &[1]).unwrap());
        assert!(verify_footnote_identity(1, &[2, 1]).unwrap());
        assert_eq!(footnote_sides(1, &[2, 1]).unwrap().0, rat_frac(407, 10));
    }
}
