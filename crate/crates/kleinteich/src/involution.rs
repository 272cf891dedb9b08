//! Lifts of the anticonformal symmetry σ = r∘R and its induced action σ*
//! on the Teichmüller coordinates of the two families, computed both via
//! generator conjugation and via the closed forms.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{
    build_genus_two, matrix_a, matrix_b, matrix_b_alpha, TeichCoordinate,
};
use crate::group::conjugate;
use crate::moebius::{cross_ratio, ExtendedMoebius, Parity, SpherePoint};

/// The lift data for σ: the half twist (parabolic square root of the
/// partition generator), the anticonformal lift r̃ with free parameter μ,
/// and their composition s = r̃ ∘ half.
#[derive(Clone, Debug)]
pub struct SymmetryLift {
    pub half: ExtendedMoebius,
    pub rtilde: ExtendedMoebius,
    pub s: ExtendedMoebius,
    pub mu: Complex64,
}

/// Four-punctured sphere lift: half = A^{1/2} = z ↦ z+1, r̃(z) = z̄+μ,
/// so s(z) = z̄ + 1 + μ.
pub fn make_lift_four_punctured(mu: Complex64) -> SymmetryLift {
    let half = matrix_a().parabolic_sqrt().unwrap();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let rtilde = ExtendedMoebius::new(one, mu, zero, one, Parity::Anticonformal).unwrap();
    let s = rtilde.compose(&half);
    SymmetryLift {
        half,
        rtilde,
        s,
        mu,
    }
}

/// Genus-two lift: half = A2^{1/2}, r̃(z) = ((1−μ)z̄ + μ)/(μz̄ + 1 + μ).
///
/// The raw matrix [1−μ, μ; μ, 1+μ] has determinant 1 − 2μ², not 1; the
/// constructor rescales it. μ = ±1/√2 is degenerate and rejected.
pub fn make_lift_genus_two(mu: Complex64) -> Result<SymmetryLift> {
    let a2 = ExtendedMoebius::conformal(
        Complex64::new(1.0, 0.0),
        Complex64::new(-2.0, 0.0),
        Complex64::new(2.0, 0.0),
        Complex64::new(-3.0, 0.0),
    )
    .unwrap();
    let half = a2.parabolic_sqrt().unwrap();
    let one = Complex64::new(1.0, 0.0);
    let rtilde = ExtendedMoebius::new(one - mu, mu, mu, one + mu, Parity::Anticonformal)?;
    let s = rtilde.compose(&half);
    Ok(SymmetryLift {
        half,
        rtilde,
        s,
        mu,
    })
}

fn fix(m: &ExtendedMoebius) -> Result<SpherePoint> {
    m.parabolic_fixed_point()
}

/// The four parabolic fixed points entering the four-punctured σ* cross
/// ratio: (f(A'), f(B'), f(A'∘B'), f(P')) with A' = sAs⁻¹, B' = sB_αs⁻¹,
/// P' = (sBs⁻¹)⁻¹.
pub fn sigma_star_alpha_points(
    alpha: Complex64,
    mu: Complex64,
) -> Result<[SpherePoint; 4]> {
    if alpha.im <= 1.0 {
        return Err(Error::OutOfDomain(format!(
            "sigma_star_alpha needs Im(alpha) > 1, got {alpha}"
        )));
    }
    let lift = make_lift_four_punctured(mu);
    let a_p = conjugate(&matrix_a(), &lift.s);
    let b_p = conjugate(&matrix_b_alpha(alpha), &lift.s);
    let p_p = conjugate(&matrix_b(), &lift.s).inverse();
    Ok([fix(&a_p)?, fix(&b_p)?, fix(&a_p.compose(&b_p))?, fix(&p_p)?])
}

/// σ*(α) by the conjugation pipeline; equals −ᾱ for every μ.
pub fn sigma_star_alpha(alpha: Complex64, mu: Complex64) -> Result<Complex64> {
    let [p1, p2, p3, p4] = sigma_star_alpha_points(alpha, mu)?;
    cross_ratio(&p1, &p2, &p3, &p4)
}

/// Closed form σ*(α) = −ᾱ.
pub fn sigma_star_alpha_closed(alpha: Complex64) -> Complex64 {
    -alpha.conj()
}

/// σ*(τ) by the conjugation pipeline.
///
/// With h = r̃ ∘ A2^{1/2} and cj(w) = h∘w∘h⁻¹, the images of the marked
/// generators are A1' = cj((A3A2)⁻¹), A2' = cj(A2), A3' = cj((A2A1)⁻¹);
/// the handle maps pick up half-twist marking factors:
/// C1' = A1'^{1/2} ∘ cj(C3⁻¹) and C3' = A3'^{-1/2} ∘ cj(C1⁻¹). The three
/// coordinate cross ratios of the transformed marking give σ*(τ).
pub fn sigma_star_tau(tau: &TeichCoordinate, mu: Complex64) -> Result<TeichCoordinate> {
    if tau.values.len() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: tau.values.len(),
        });
    }
    let (t1, t2, t3) = (tau.values[0], tau.values[1], tau.values[2]);
    let fam = build_genus_two((t1, t2, t3))?;
    let get = |n: &str| fam.table.get(n).cloned();
    let a1 = get("A1")?;
    let a2 = get("A2")?;
    let a3 = get("A3")?;
    let c1 = get("C1")?;
    let c3 = get("C3")?;

    let lift = make_lift_genus_two(mu)?;
    let h = &lift.s;
    let cj = |w: &ExtendedMoebius| conjugate(w, h);

    let a1p = cj(&a3.compose(&a2).inverse());
    let a2p = cj(&a2);
    let a3p = cj(&a2.compose(&a1).inverse());

    // τ1 slot of the transformed marking.
    let c1p = a1p.parabolic_sqrt()?.compose(&cj(&c3.inverse()));
    let b1p = c1p.inverse().compose(&a1p).compose(&c1p).inverse();
    let s1 = cross_ratio(
        &fix(&a1p)?,
        &fix(&b1p)?,
        &fix(&a2p)?,
        &c1p.apply(&fix(&a1p)?),
    )?;

    // τ2 slot.
    let s2 = cross_ratio(
        &fix(&a2p)?,
        &fix(&cj(&a3))?,
        &fix(&a2p.compose(&cj(&a3)))?,
        &fix(&cj(&a1).inverse())?,
    )?;

    // τ3 slot, mirrored through A3'.
    let c3p = a3p.parabolic_sqrt()?.inverse().compose(&cj(&c1.inverse()));
    let s3 = cross_ratio(
        &fix(&a3p.inverse())?,
        &fix(&a3p.compose(&a2p))?,
        &fix(&a2p)?,
        &c3p.apply(&fix(&a3p.inverse())?),
    )?;

    Ok(TeichCoordinate::tau(s1, s2, s3))
}

/// Closed form σ*(τ) = (1 − τ̄3, −τ̄2, 1 − τ̄1).
pub fn sigma_star_tau_closed(tau: &TeichCoordinate) -> TeichCoordinate {
    let one = Complex64::new(1.0, 0.0);
    TeichCoordinate::tau(
        one - tau.values[2].conj(),
        -tau.values[1].conj(),
        one - tau.values[0].conj(),
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct InvolutionReport {
    pub samples: usize,
    pub max_deviation: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Double-application check: σ*(σ*(x)) = x within tol on random samples.
pub fn check_involution_four_punctured(
    samples: usize,
    mu: Complex64,
    tol: f64,
    seed: u64,
) -> Result<InvolutionReport> {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut max_dev: f64 = 0.0;
    for _ in 0..samples {
        let alpha = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(1.2..3.5));
        let once = sigma_star_alpha(alpha, mu)?;
        let twice = sigma_star_alpha(once, mu)?;
        max_dev = max_dev.max((twice - alpha).norm());
    }
    Ok(InvolutionReport {
        samples,
        max_deviation: max_dev,
        tol,
        pass: max_dev <= tol,
    })
}

pub fn check_involution_genus_two(
    samples: usize,
    mu: Complex64,
    tol: f64,
    seed: u64,
) -> Result<InvolutionReport> {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut max_dev: f64 = 0.0;
    for _ in 0..samples {
        let tau = TeichCoordinate::tau(
            Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(1.5..2.5)),
            Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(1.5..2.5)),
            Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(1.5..2.5)),
        );
        let once = sigma_star_tau(&tau, mu)?;
        let twice = sigma_star_tau(&once, mu)?;
        for (a, b) in twice.values.iter().zip(tau.values.iter()) {
            max_dev = max_dev.max((a - b).norm());
        }
    }
    Ok(InvolutionReport {
        samples,
        max_deviation: max_dev,
        tol,
        pass: max_dev <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn lift_four_punctured_shape() {
        let l = make_lift_four_punctured(c(0.0, 0.0));
        // s(z) = z̄ + 1
        let z = c(0.25, 1.5);
        let got = l
            .s
            .apply(&SpherePoint::finite(z))
            .to_complex()
            .unwrap();
        assert!((got - (z.conj() + c(1.0, 0.0))).norm() < 1e-12);

        let l = make_lift_four_punctured(c(0.0, 3.0));
        let got = l
            .s
            .apply(&SpherePoint::finite(c(-1.0, 0.0)))
            .to_complex()
            .unwrap();
        // s(-1) = conj(-1) + 1 + 3i = 3i; rtilde alone maps 0 to 1·0+μ... check rtilde(0)=μ
        let r0 = l
            .rtilde
            .apply(&SpherePoint::finite(c(0.0, 0.0)))
            .to_complex()
            .unwrap();
        assert!((r0 - c(0.0, 3.0)).norm() < 1e-12);
        assert!((got - c(0.0, 3.0)).norm() < 1e-12);
    }

    #[test]
    fn rtilde_involutive_for_imaginary_mu() {
        for mu in [c(0.0, 0.0), c(0.0, 1.3), c(0.0, -0.4)] {
            let l = make_lift_four_punctured(mu);
            let rr = l.rtilde.compose(&l.rtilde);
            assert!(rr.is_identity(1e-12), "mu = {mu}");
            let l = make_lift_genus_two(mu).unwrap();
            let rr = l.rtilde.compose(&l.rtilde);
            assert!(rr.is_identity(1e-12), "genus2 mu = {mu}");
        }
    }

    #[test]
    fn genus_two_lift_rejects_degenerate_mu() {
        let mu = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        assert!(matches!(
            make_lift_genus_two(mu),
            Err(Error::ZeroDeterminant)
        ));
        assert!(make_lift_genus_two(c(0.3, -0.2)).is_ok());
    }

    #[test]
    fn sigma_alpha_closed_form_examples() {
        let got = sigma_star_alpha(c(0.0, 2.0), c(0.0, 0.0)).unwrap();
        assert!((got - c(0.0, 2.0)).norm() < 1e-10);
        for mu in [c(0.0, 0.0), c(1.0, 1.0), c(0.0, -2.0)] {
            let got = sigma_star_alpha(c(0.3, 1.5), mu).unwrap();
            assert!((got - c(-0.3, 1.5)).norm() < 1e-10, "mu = {mu}");
        }
    }

    #[test]
    fn sigma_alpha_mu_independence() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let alpha = c(0.7, 1.9);
        let base = sigma_star_alpha(alpha, c(0.0, 0.0)).unwrap();
        for _ in 0..10 {
            let mu = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let got = sigma_star_alpha(alpha, mu).unwrap();
            assert!((got - base).norm() < 1e-9, "mu = {mu}");
        }
    }

    #[test]
    fn sigma_alpha_pipeline_points_match_printed_arguments() {
        let alpha = c(0.4, 2.1);
        let mu = c(0.3, -0.2);
        let pts = sigma_star_alpha_points(alpha, mu).unwrap();
        assert!(pts[0].is_infinite());
        let expected = [
            alpha.conj() + c(1.0, 0.0) + mu,
            alpha.conj() + c(2.0, 0.0) + mu,
            c(1.0, 0.0) + mu,
        ];
        for (p, e) in pts[1..].iter().zip(expected.iter()) {
            assert!((p.to_complex().unwrap() - e).norm() < 1e-9);
        }
    }

    #[test]
    fn sigma_alpha_assignment_is_the_unique_variant() {
        // Among the eight swap/inversion assignments of (B, B_α) to the
        // second and fourth cross-ratio slots, only the implemented one
        // (B' = sB_αs⁻¹ uninverted, P' = (sBs⁻¹)⁻¹) reproduces the printed
        // argument list (∞, ᾱ+1+μ, ᾱ+2+μ, 1+μ).
        let alpha = c(0.4, 2.1);
        let mu = c(0.3, -0.2);
        let lift = make_lift_four_punctured(mu);
        let printed = [
            alpha.conj() + c(1.0, 0.0) + mu,
            alpha.conj() + c(2.0, 0.0) + mu,
            c(1.0, 0.0) + mu,
        ];
        let a_p = conjugate(&matrix_a(), &lift.s);
        let mut hits = Vec::new();
        for swap in [false, true] {
            for inv_b in [false, true] {
                for inv_p in [false, true] {
                    let (x, y) = if swap {
                        (matrix_b(), matrix_b_alpha(alpha))
                    } else {
                        (matrix_b_alpha(alpha), matrix_b())
                    };
                    let mut b_p = conjugate(&x, &lift.s);
                    if inv_b {
                        b_p = b_p.inverse();
                    }
                    let mut p_p = conjugate(&y, &lift.s);
                    if inv_p {
                        p_p = p_p.inverse();
                    }
                    let pts = [
                        fix(&a_p),
                        fix(&b_p),
                        fix(&a_p.compose(&b_p)),
                        fix(&p_p),
                    ];
                    let ok = pts.iter().all(|p| p.is_ok()) && {
                        let pts: Vec<SpherePoint> =
                            pts.into_iter().map(|p| p.unwrap()).collect();
                        pts[0].is_infinite()
                            && pts[1..].iter().zip(printed.iter()).all(|(p, e)| {
                                p.to_complex()
                                    .map(|z| (z - e).norm() < 1e-9)
                                    .unwrap_or(false)
                            })
                    };
                    if ok {
                        hits.push((swap, inv_b, inv_p));
                    }
                }
            }
        }
        // Inverting a parabolic does not move its fixed point, so the
        // printed argument list cannot see inv_p: exactly the two
        // unswapped, uninverted-B variants survive.
        assert_eq!(hits, vec![(false, false, false), (false, false, true)]);

        // The tie is broken at the element level. Renormalizing by the
        // translation n taking the argument list to (∞, 0, 1, σ*(α)),
        // the fourth-slot element of the implemented variant becomes the
        // designated puncture parabolic T3 = B_{σ*(α)}⁻¹ of the image
        // family; the uninverted variant gives its inverse instead.
        use crate::moebius::projectively_equal;
        let alpha_img = -alpha.conj();
        let n = ExtendedMoebius::translation(-(alpha.conj() + c(1.0, 0.0) + mu));
        let p_impl = conjugate(&matrix_b(), &lift.s).inverse();
        let p_raw = conjugate(&matrix_b(), &lift.s);
        let t3_img = matrix_b_alpha(alpha_img).inverse();
        assert!(projectively_equal(&conjugate(&p_impl, &n), &t3_img, 1e-9));
        assert!(!projectively_equal(&conjugate(&p_raw, &n), &t3_img, 1e-9));
        // And the other two slots renormalize onto the standard A and B.
        assert!(projectively_equal(&conjugate(&a_p, &n), &matrix_a(), 1e-9));
        let b_p = conjugate(&matrix_b_alpha(alpha), &lift.s);
        assert!(projectively_equal(&conjugate(&b_p, &n), &matrix_b(), 1e-9));
    }

    #[test]
    fn sigma_tau_matches_closed_form() {
        let tau = TeichCoordinate::tau(c(1.0, 2.0), c(0.5, 2.0), c(-1.0, 2.0));
        let closed = sigma_star_tau_closed(&tau);
        assert!((closed.values[0] - c(2.0, 2.0)).norm() < 1e-14);
        assert!((closed.values[1] - c(-0.5, 2.0)).norm() < 1e-14);
        assert!((closed.values[2] - c(0.0, 2.0)).norm() < 1e-14);
        for mu in [c(0.0, 0.0), c(0.0, 0.7), c(0.3, -0.2)] {
            let got = sigma_star_tau(&tau, mu).unwrap();
            for (g, e) in got.values.iter().zip(closed.values.iter()) {
                assert!((g - e).norm() < 1e-8, "mu = {mu}: {g} vs {e}");
            }
        }
    }

    #[test]
    fn sigma_tau_random_samples_match_closed_form() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let tau = TeichCoordinate::tau(
                c(rng.gen_range(-1.5..1.5), rng.gen_range(1.5..2.5)),
                c(rng.gen_range(-1.5..1.5), rng.gen_range(1.5..2.5)),
                c(rng.gen_range(-1.5..1.5), rng.gen_range(1.5..2.5)),
            );
            let got = sigma_star_tau(&tau, c(0.0, 0.0)).unwrap();
            let closed = sigma_star_tau_closed(&tau);
            for (g, e) in got.values.iter().zip(closed.values.iter()) {
                assert!((g - e).norm() < 1e-8, "tau = {:?}", tau.values);
            }
        }
    }

    #[test]
    fn pure_imaginary_tau2_is_fixed() {
        let tau = TeichCoordinate::tau(c(0.5, 2.0), c(0.0, 3.0), c(0.5, 2.0));
        let closed = sigma_star_tau_closed(&tau);
        assert!((closed.values[1] - c(0.0, 3.0)).norm() < 1e-14);
    }

    #[test]
    fn involution_double_application() {
        let r = check_involution_four_punctured(20, c(0.0, 0.0), 1e-8, 1).unwrap();
        assert!(r.pass, "max dev {}", r.max_deviation);
        let r = check_involution_genus_two(20, c(0.0, 0.0), 1e-8, 2).unwrap();
        assert!(r.pass, "max dev {}", r.max_deviation);
    }

    #[test]
    fn anti_holomorphy_finite_difference_witness() {
        // σ*(α) = −ᾱ is anti-holomorphic: d/dα along +1 gives −1, along
        // +i gives... σ*(α+εi) − σ*(α) = −conj(εi) = +εi, so the two
        // directional derivatives satisfy D_i = −i·(−D_1), i.e. the
        // conjugate Cauchy-Riemann relations.
        let alpha = c(0.4, 2.0);
        let mu = c(0.0, 0.0);
        let eps = 1e-6;
        let f0 = sigma_star_alpha(alpha, mu).unwrap();
        let dx = (sigma_star_alpha(alpha + c(eps, 0.0), mu).unwrap() - f0) / eps;
        let dy = (sigma_star_alpha(alpha + c(0.0, eps), mu).unwrap() - f0) / eps;
        // For f(α) = −ᾱ: dx = −1, dy = +i.
        assert!((dx - c(-1.0, 0.0)).norm() < 1e-6);
        assert!((dy - c(0.0, 1.0)).norm() < 1e-6);
        // Conjugate Cauchy-Riemann relations: dy = −i·dx (a holomorphic
        // map would satisfy dy = +i·dx instead, which fails here).
        assert!((dy - c(0.0, -1.0) * dx).norm() < 1e-6);
        assert!((dy - c(0.0, 1.0) * dx).norm() > 1e-3);
    }
}
