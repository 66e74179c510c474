//! Divided differences `f[X₁,…,X_N] = Σ_k f(X_k) Π_{l≠k} (X_k − X_l)⁻¹` of
//! analytic functions, including their coincidence limits.
//!
//! The points are grouped into clusters. A cluster is a set of points whose
//! pairwise links are short compared with the distance to the nearest
//! singularity of `f`. Isolated points contribute their residue directly. A
//! genuine cluster contributes a contour integral around it, evaluated with
//! the trapezoidal rule on a circle. That rule converges geometrically and
//! does not care whether the points inside coincide.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::{Error, Result};

type C = Complex64;

/// Points closer than this fraction of their distance to a singularity are clustered.
pub const CLUSTER_RATIO: f64 = 0.25;

/// Distance from `z` to the ray `(−∞, a]`.
pub fn dist_to_cut(z: C, a: f64) -> f64 {
    if z.re >= a {
        (z - a).norm()
    } else {
        z.im.abs()
    }
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    parent[i] = r;
    r
}

/// Groups indices into clusters by single linkage.
pub fn clusters(xs: &[C], dist_sing: &dyn Fn(C) -> f64) -> Vec<Vec<usize>> {
    let n = xs.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            let scale = dist_sing(xs[i]).min(dist_sing(xs[j]));
            if (xs[i] - xs[j]).norm() < CLUSTER_RATIO * scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = alloc::vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_of[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(alloc::vec![i]);
            }
        }
    }
    groups
}

/// `f[X₁,…,X_N]` for `f` analytic away from the set where `dist_sing` vanishes.
pub fn divided_difference(f: &dyn Fn(C) -> Result<C>, xs: &[C], dist_sing: &dyn Fn(C) -> f64) -> Result<C> {
    if xs.is_empty() {
        return Err(Error::input("divided difference of an empty set"));
    }
    if xs.len() == 1 {
        return f(xs[0]);
    }
    let mut total = C::new(0.0, 0.0);
    for group in clusters(xs, dist_sing) {
        let outside: Vec<C> = (0..xs.len()).filter(|i| !group.contains(i)).map(|i| xs[i]).collect();
        if group.len() == 1 {
            let x = xs[group[0]];
            let den: C = outside.iter().map(|&y| x - y).product();
            total += f(x)? / den;
            continue;
        }
        let inside: Vec<C> = group.iter().map(|&i| xs[i]).collect();
        let z0 = inside.iter().sum::<C>() / inside.len() as f64;
        let r = inside.iter().map(|&x| (x - z0).norm()).fold(0.0, f64::max);
        let big_r = outside.iter().map(|&y| (y - z0).norm()).fold(dist_sing(z0), f64::min);
        let rho = Float::sqrt(r * big_r).max(0.5 * big_r);
        let q = (r / rho).max(rho / big_r);
        if !(q < 0.95) || !(big_r > 0.0) {
            return Err(Error::Conditioning { condition: q });
        }
        let m = ((39.2 / -Float::ln(q)).ceil() as usize).clamp(64, 8192);
        let mut acc = C::new(0.0, 0.0);
        for k in 0..m {
            let dz = C::from_polar(rho, 2.0 * PI * k as f64 / m as f64);
            let z = z0 + dz;
            let den: C = inside.iter().chain(&outside).map(|&x| z - x).product();
            acc += f(z)? * dz / den;
        }
        total += acc / m as f64;
    }
    Ok(total)
}
