//! Real-linear fixed-point loci of σ* on Teichmüller coordinates:
//! constraint systems over (Re, Im) parts, membership, exact sampling,
//! and the numeric fixed-set comparison.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::TeichCoordinate;
use crate::involution::{
    sigma_star_alpha, sigma_star_alpha_closed, sigma_star_tau, sigma_star_tau_closed,
};

/// Which printed genus-two system to use. The introduction and the final
/// section of the source derivation print different systems; `Section4`
/// (the one derived from σ*(τ1) = 1 − τ̄3) is the numerically confirmed
/// fixed set and the default.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub enum GenusTwoSystem {
    #[default]
    Section4,
    Intro,
}

/// An affine-linear system over the real coordinates
/// (Re x1, Im x1, Re x2, Im x2, …): equalities coeffs·v = rhs and strict
/// inequalities coeffs·v > rhs.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub dim: usize,
    pub equalities: Vec<(Vec<f64>, f64)>,
    pub inequalities: Vec<(Vec<f64>, f64)>,
}

/// {Re α = 0, Im α > 1}.
pub fn locus_four_punctured() -> ConstraintSystem {
    ConstraintSystem {
        dim: 2,
        equalities: vec![(vec![1.0, 0.0], 0.0)],
        inequalities: vec![(vec![0.0, 1.0], 1.0)],
    }
}

/// The three printed equalities of the concluding genus-two system:
/// {Re τ2 = 0, Re τ1 = 1 − Re τ3, Im τ1 = Im τ3}. No inequalities: the
/// source prints no domain bounds for this family.
pub fn locus_genus_two() -> ConstraintSystem {
    locus_genus_two_system(GenusTwoSystem::Section4)
}

pub fn locus_genus_two_system(system: GenusTwoSystem) -> ConstraintSystem {
    let equalities = match system {
        GenusTwoSystem::Section4 => vec![
            // Re τ2 = 0
            (vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0], 0.0),
            // Re τ1 + Re τ3 = 1
            (vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0], 1.0),
            // Im τ1 − Im τ3 = 0
            (vec![0.0, 1.0, 0.0, 0.0, 0.0, -1.0], 0.0),
        ],
        // The introductory statement of the same result prints
        // {Re τ2 = 0, Re τ1 = Im τ3, Re τ1 + Re τ3 = 0}; kept for
        // numeric comparison, not as the primary locus.
        GenusTwoSystem::Intro => vec![
            (vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0], 0.0),
            (vec![1.0, 0.0, 0.0, 0.0, 0.0, -1.0], 0.0),
            (vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0], 0.0),
        ],
    };
    ConstraintSystem {
        dim: 6,
        equalities,
        inequalities: vec![],
    }
}

fn coords_to_real(x: &TeichCoordinate) -> Vec<f64> {
    x.values.iter().flat_map(|z| [z.re, z.im]).collect()
}

fn real_to_coords(v: &[f64]) -> TeichCoordinate {
    TeichCoordinate {
        values: v
            .chunks(2)
            .map(|c| Complex64::new(c[0], c[1]))
            .collect(),
    }
}

/// All equalities within tol and all strict inequalities satisfied.
pub fn member(sys: &ConstraintSystem, x: &TeichCoordinate, tol: f64) -> Result<bool> {
    let v = coords_to_real(x);
    if v.len() != sys.dim {
        return Err(Error::DimensionMismatch {
            expected: sys.dim,
            got: v.len(),
        });
    }
    let dot = |c: &[f64]| c.iter().zip(v.iter()).map(|(a, b)| a * b).sum::<f64>();
    for (coeffs, rhs) in &sys.equalities {
        if (dot(coeffs) - rhs).abs() > tol {
            return Ok(false);
        }
    }
    for (coeffs, rhs) in &sys.inequalities {
        if dot(coeffs) <= *rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Reduced row echelon form of [A | b]. Returns (pivot column per row,
/// reduced rows) or None if inconsistent.
fn rref(mut rows: Vec<(Vec<f64>, f64)>, dim: usize) -> Option<Vec<(usize, Vec<f64>, f64)>> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut pivot_col = 0;
    let mut r = 0;
    while r < rows.len() && pivot_col < dim {
        // partial pivoting
        let (best, best_val) = rows[r..]
            .iter()
            .enumerate()
            .map(|(i, (c, _))| (i + r, c[pivot_col].abs()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        if best_val < 1e-12 {
            pivot_col += 1;
            continue;
        }
        rows.swap(r, best);
        let scale = rows[r].0[pivot_col];
        for v in rows[r].0.iter_mut() {
            *v /= scale;
        }
        rows[r].1 /= scale;
        let (pivot_row, pivot_rhs) = (rows[r].0.clone(), rows[r].1);
        for (i, (c, b)) in rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = c[pivot_col];
            if f != 0.0 {
                for (v, p) in c.iter_mut().zip(pivot_row.iter()) {
                    *v -= f * p;
                }
                *b -= f * pivot_rhs;
            }
        }
        pivots.push(pivot_col);
        r += 1;
        pivot_col += 1;
    }
    // rows below r must be 0 = 0
    for (c, b) in rows[r..].iter() {
        if c.iter().all(|v| v.abs() < 1e-10) && b.abs() > 1e-10 {
            return None;
        }
    }
    // collect only after every elimination pass so the rows are fully
    // reduced (each pivot column appears in exactly one row)
    Some(
        pivots
            .into_iter()
            .enumerate()
            .map(|(i, p)| (p, rows[i].0.clone(), rows[i].1))
            .collect(),
    )
}

/// Dimension of the affine solution space of the equalities.
pub fn solution_dimension(sys: &ConstraintSystem) -> Result<usize> {
    let reduced = rref(sys.equalities.clone(), sys.dim).ok_or(Error::Unsatisfiable)?;
    Ok(sys.dim - reduced.len())
}

/// n points satisfying the system exactly by construction: the equality
/// null space is parameterized and the free coordinates are drawn
/// uniformly from [−2, 2] when they are real parts (even indices) and
/// [1.5, 3.5] when they are imaginary parts (odd indices). Points failing
/// a strict inequality are redrawn.
pub fn sample_locus(
    sys: &ConstraintSystem,
    n: usize,
    rng_seed: u64,
) -> Result<Vec<TeichCoordinate>> {
    let reduced = rref(sys.equalities.clone(), sys.dim).ok_or(Error::Unsatisfiable)?;
    let pivot_cols: Vec<usize> = reduced.iter().map(|(p, _, _)| *p).collect();
    let free_cols: Vec<usize> = (0..sys.dim).filter(|c| !pivot_cols.contains(c)).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while out.len() < n {
        attempts += 1;
        if attempts > 1000 * (n + 1) {
            return Err(Error::Unsatisfiable);
        }
        let mut v = vec![0.0; sys.dim];
        for &col in &free_cols {
            v[col] = if col % 2 == 0 {
                rng.gen_range(-2.0..2.0)
            } else {
                rng.gen_range(1.5..3.5)
            };
        }
        // back-substitute pivots
        for (p, coeffs, rhs) in &reduced {
            let rest: f64 = coeffs
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != *p)
                .map(|(i, c)| c * v[i])
                .sum();
            v[*p] = rhs - rest;
        }
        let x = real_to_coords(&v);
        if member(sys, &x, 1e-9)? {
            out.push(x);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedSetReport {
    pub kind: String,
    pub on_locus_samples: usize,
    pub off_locus_samples: usize,
    pub max_on_locus_deviation: f64,
    pub min_off_locus_deviation: f64,
    pub tol: f64,
    pub counterexamples: Vec<Vec<[f64; 2]>>,
    pub pass: bool,
}

fn deviation(x: &TeichCoordinate, y: &TeichCoordinate) -> f64 {
    x.values
        .iter()
        .zip(y.values.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

/// (a) sampled locus points are σ*-fixed within tol (both closed form and
/// pipeline); (b) random off-locus points move by more than tol.
pub fn fixed_set_equivalence_four_punctured(
    n: usize,
    tol: f64,
    seed: u64,
) -> Result<FixedSetReport> {
    let sys = locus_four_punctured();
    let samples = sample_locus(&sys, n, seed)?;
    let mut max_on: f64 = 0.0;
    let mut counterexamples = Vec::new();
    for x in &samples {
        let alpha = x.values[0];
        let closed = sigma_star_alpha_closed(alpha);
        let pipeline = sigma_star_alpha(alpha, Complex64::new(0.0, 0.0))?;
        let dev = (closed - alpha).norm().max((pipeline - alpha).norm());
        max_on = max_on.max(dev);
        if dev >= tol {
            counterexamples.push(vec![[alpha.re, alpha.im]]);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut min_off = f64::INFINITY;
    let mut off = 0usize;
    while off < n {
        let alpha = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(1.2..3.5));
        // stay clearly off the locus so the margin is meaningful
        if alpha.re.abs() < 10.0 * tol {
            continue;
        }
        off += 1;
        let dev = (sigma_star_alpha_closed(alpha) - alpha).norm();
        min_off = min_off.min(dev);
        if dev <= tol {
            counterexamples.push(vec![[alpha.re, alpha.im]]);
        }
    }
    let pass = counterexamples.is_empty();
    Ok(FixedSetReport {
        kind: "four_punctured".to_string(),
        on_locus_samples: n,
        off_locus_samples: n,
        max_on_locus_deviation: max_on,
        min_off_locus_deviation: min_off,
        tol,
        counterexamples,
        pass,
    })
}

pub fn fixed_set_equivalence_genus_two(
    n: usize,
    tol: f64,
    seed: u64,
) -> Result<FixedSetReport> {
    let sys = locus_genus_two();
    let samples = sample_locus(&sys, n, seed)?;
    let mut max_on: f64 = 0.0;
    let mut counterexamples = Vec::new();
    for x in &samples {
        let closed = sigma_star_tau_closed(x);
        let pipeline = sigma_star_tau(x, Complex64::new(0.0, 0.0))?;
        let dev = deviation(&closed, x).max(deviation(&pipeline, x));
        max_on = max_on.max(dev);
        if dev >= tol {
            counterexamples.push(x.values.iter().map(|z| [z.re, z.im]).collect());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut min_off = f64::INFINITY;
    let mut off = 0usize;
    while off < n {
        let x = TeichCoordinate::tau(
            Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(1.5..2.5)),
            Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(1.5..2.5)),
            Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(1.5..2.5)),
        );
        // closed-form residual is twice the distance to the locus per
        // coordinate; skip points too close to the locus
        let closed = sigma_star_tau_closed(&x);
        let dev = deviation(&closed, &x);
        if dev < 10.0 * tol {
            continue;
        }
        off += 1;
        min_off = min_off.min(dev);
    }
    let pass = counterexamples.is_empty();
    Ok(FixedSetReport {
        kind: "genus_two".to_string(),
        on_locus_samples: n,
        off_locus_samples: n,
        max_on_locus_deviation: max_on,
        min_off_locus_deviation: min_off,
        tol,
        counterexamples,
        pass,
    })
}
