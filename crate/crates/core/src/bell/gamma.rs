//! The γ coefficients of the factorised (1+…+1)-point ansatz.
//!
//! Every `γ^M_B` is stored as `g^M_B(x) · ρ₀^{−(B−3)}` with `g` an exact
//! polynomial in `x_r = −(2r+1)!! ρ_r / ((r+1) ρ₀)`. In these variables the
//! triangular system reads
//!
//! ```text
//! g^M_B = g^{M−1}_{B−1} + Σ_{j≥1} C(M+j, j) (j+1) x_j g^{M+j}_B
//! ```
//!
//! and is solved for descending `M`, starting from `g^M_3 = δ_{M,0}`.

use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Zero;

use super::{dfact_q, fact_q, inv_fact_q, symbolic_table, symbolic_vars};
use crate::exact::{binomial, rat, MPoly, Rational};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct GammaTable {
    pub b: usize,
    /// `g^M_B` for `M = 0..=B−3`, polynomials in `x₁..x_{B−3}`.
    pub entries: Vec<MPoly>,
    /// Power of ρ₀ multiplying every entry, `−(B−3)`.
    pub rho0_power: i32,
}

impl GammaTable {
    pub fn get(&self, m: usize) -> Option<&MPoly> {
        self.entries.get(m)
    }
}

fn check_b(b: usize) -> Result<()> {
    if b < 3 {
        return Err(Error::input(alloc::format!("γ tower starts at B = 3, got {b}")));
    }
    Ok(())
}

/// Closed form `Σ_K (B−3+K)!/((B−3−M)! M!) B_{B−3−M,K}(x)` with its ρ₀ power.
pub fn gamma_closed(b: usize, m: usize) -> Result<(MPoly, i32)> {
    check_b(b)?;
    if m > b - 3 {
        return Err(Error::input(alloc::format!("M = {m} outside 0..={} for B = {b}", b - 3)));
    }
    let arity = b - 3;
    let s = (b - 3 - m) as i64;
    let table = symbolic_table(arity, s as usize);
    let mut acc = MPoly::zero(arity);
    let pre = inv_fact_q(s) * inv_fact_q(m as i64);
    for k in 0..=s {
        let c = fact_q(b as i64 - 3 + k) * &pre;
        acc = acc + table.get(s, k)?.scale(&c);
    }
    Ok((acc, -(b as i32 - 3)))
}

/// Solves the triangular system level by level up to `B`, checking the
/// second family of relations exactly at every level on the way.
pub fn gamma_recursive(b: usize) -> Result<GammaTable> {
    check_b(b)?;
    let mut prev = GammaTable { b: 3, entries: alloc::vec![MPoly::one(0)], rho0_power: 0 };
    for level in 4..=b {
        let next = next_level(&prev, level)?;
        check_consistency(&next, &prev)?;
        prev = next;
    }
    Ok(prev)
}

fn next_level(prev: &GammaTable, b: usize) -> Result<GammaTable> {
    let arity = b - 3;
    let xs = symbolic_vars(arity);
    let lower: Vec<MPoly> = prev.entries.iter().map(|p| p.extend_arity(arity)).collect::<Result<_>>()?;
    let top = b - 3;
    let mut g = alloc::vec![MPoly::zero(arity); top + 1];
    for m in (0..=top).rev() {
        let mut acc =
            if m >= 1 { lower.get(m - 1).cloned().unwrap_or_else(|| MPoly::zero(arity)) } else { MPoly::zero(arity) };
        for j in 1..=(top - m) {
            let c = Rational::from_integer(binomial((m + j) as i64, j as i64)) * rat(j as i64 + 1);
            acc = acc + (&xs[j - 1] * &g[m + j]).scale(&c);
        }
        g[m] = acc;
    }
    Ok(GammaTable { b, entries: g, rho0_power: -(b as i32 - 3) })
}

/// `3(M+1) g^{M+1}_B − Σ_{j≥1} C(M+1+j, j+1)(2j+3)(j+1) x_j g^{M+1+j}_B = (2M+B−1) g^M_{B−1}`.
fn check_consistency(cur: &GammaTable, prev: &GammaTable) -> Result<()> {
    let b = cur.b;
    let arity = b - 3;
    let xs = symbolic_vars(arity);
    for m in 0..=(b - 4) {
        let mut lhs = cur.entries[m + 1].scale(&rat(3 * (m as i64 + 1)));
        for j in 1..=(b - 4 - m) {
            let c = Rational::from_integer(binomial((m + 1 + j) as i64, j as i64 + 1))
                * rat((2 * j as i64 + 3) * (j as i64 + 1));
            lhs = lhs - (&xs[j - 1] * &cur.entries[m + 1 + j]).scale(&c);
        }
        let rhs = prev.entries[m].extend_arity(arity)?.scale(&rat(2 * m as i64 + b as i64 - 1));
        if lhs != rhs {
            return Err(Error::Inconsistency(alloc::format!(
                "second γ relation fails at B={b}, M={m}: lhs = {lhs}, rhs = {rhs}"
            )));
        }
    }
    Ok(())
}

/// `x_r = −(2r+1)!! ρ_r / ((r+1) ρ₀)` for `r = 1..rhos.len()−1`.
pub fn x_from_moments(rhos: &[Complex64]) -> Result<Vec<Complex64>> {
    let rho0 = *rhos.first().ok_or_else(|| Error::input("need at least ρ₀"))?;
    if rho0.is_zero() {
        return Err(Error::singular("ρ₀ = 0: the γ coefficients blow up at the critical point"));
    }
    Ok((1..rhos.len())
        .map(|r| {
            let df = crate::exact::rat_to_f64(&dfact_q(2 * r as i64 + 1));
            -rhos[r] * df / ((r as f64 + 1.0) * rho0)
        })
        .collect())
}

/// Numerical `γ^M_B` for `M = 0..=B−3` from the moments `ρ₀, ρ₁, …`.
pub fn gamma_numeric(table: &GammaTable, rhos: &[Complex64]) -> Result<Vec<Complex64>> {
    let arity = table.b - 3;
    if rhos.len() < arity + 1 {
        return Err(Error::input(alloc::format!("need moments up to ρ_{arity}")));
    }
    let xs = x_from_moments(&rhos[..=arity])?;
    let scale = rhos[0].powi(table.rho0_power);
    let proto = Complex64::new(0.0, 0.0);
    table.entries.iter().map(|p| Ok(p.eval_in(&xs, &proto)? * scale)).collect()
}
