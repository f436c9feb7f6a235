//! Acceptance suite: one PASS/FAIL line per criterion; exits non-zero on any failure.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::Instant;

use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wedgelab::causal::{
    crown_base_point, crown_margin, sl2_euler, GroupWedge, KmsTester, Quadric, SpacePoint, StripGrid,
    CROWN_MARGIN, GROUP_WEDGE_MARGIN, POSITIVITY_MARGIN,
};
use wedgelab::hardy::{
    self, gram, min_eigenvalue, orbit_norm_squared, strip_j, strip_kernel, strip_translate, KernelModel, C64,
};
use wedgelab::lie::{self, builtin, AlgebraElement};
use wedgelab::modular;
use wedgelab::Result;

type Outcome = Result<(bool, String)>;
type Criterion = (&'static str, fn() -> Outcome);

fn max_coeff_diff(a: &AlgebraElement, b: &AlgebraElement) -> f64 {
    (a.coeffs() - b.coeffs()).amax()
}

/// Multiset match of eigenvalues within `tol`.
fn same_spectrum(got: &[Complex<f64>], want: &[Complex<f64>], tol: f64) -> bool {
    if got.len() != want.len() {
        return false;
    }
    let mut used = vec![false; want.len()];
    got.iter().all(|l| match (0..want.len()).find(|&k| !used[k] && (want[k] - l).norm() <= tol) {
        Some(k) => {
            used[k] = true;
            true
        }
        None => false,
    })
}

fn sl2_structure() -> Outcome {
    let start = Instant::now();
    let g = builtin::sl2();
    let (h, e, f) = (g.basis_element(0), g.basis_element(1), g.basis_element(2));
    let table = [
        max_coeff_diff(&h.bracket(&e)?, &e),
        max_coeff_diff(&h.bracket(&f)?, &(-&f)),
        max_coeff_diff(&e.bracket(&f)?, &h.scale(2.0)),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let euler = lie::is_euler(&h);
    let dims = lie::grading(&h)?.dims();
    let theta = lie::cartan_involution_transpose(&g)?;
    let theta_err = max_coeff_diff(&theta.apply(&h), &(-&h));
    let secs = start.elapsed().as_secs_f64();
    let pass = table <= 1e-12 && euler && dims == (1, 1, 1) && theta_err <= 1e-12 && secs < 1.0;
    Ok((
        pass,
        format!("bracket {table:.1e}, euler {euler}, dims {dims:?}, theta {theta_err:.1e}, {secs:.3}s"),
    ))
}

fn grading_dimensions() -> Outcome {
    let mut pass = lie::GRADING_RANK_TOL <= 1e-9;
    let mut seen = Vec::new();
    for d in 2..=4 {
        let g = builtin::so_1d(d)?;
        let (m, _, p) = lie::grading(&builtin::lorentz_boost(&g))?.dims();
        pass &= m == d - 1 && p == d - 1;
        seen.push(format!("so(1,{d}) {m}/{p}"));
    }
    for d in 3..=4 {
        let g = builtin::so_2d(d)?;
        let (_, _, p) = lie::grading(&builtin::so2d_euler(&g))?.dims();
        pass &= p == d;
        seen.push(format!("so(2,{d}) {p}"));
    }
    Ok((pass, seen.join(", ")))
}

fn elliptic_hyperbolic() -> Outcome {
    let g = builtin::sl2();
    let (e, f) = (g.basis_element(1), g.basis_element(2));
    let c = |re: f64, im: f64| Complex::new(re, im);
    let k = &e - &f;
    let a = &e + &f;
    let sk = lie::spectrum(&k)?;
    let sa = lie::spectrum(&a)?;
    let se = lie::spectrum(&e)?;
    let pass = lie::is_elliptic(&k)
        && !lie::is_hyperbolic(&k)
        && same_spectrum(&sk.eigenvalues, &[c(0.0, 0.0), c(0.0, 2.0), c(0.0, -2.0)], 1e-10)
        && lie::is_hyperbolic(&a)
        && !lie::is_elliptic(&a)
        && same_spectrum(&sa.eigenvalues, &[c(0.0, 0.0), c(2.0, 0.0), c(-2.0, 0.0)], 1e-10)
        && !lie::is_elliptic(&e)
        && !lie::is_hyperbolic(&e)
        && !se.semisimple;
    Ok((pass, format!("e-f {:?}, e+f {:?}", sk.eigenvalues, sa.eigenvalues)))
}

fn de_sitter_oracle() -> Outcome {
    let times = [-1.0, -0.5, 0.5, 1.0];
    let mut pass = true;
    let mut parts = Vec::new();
    for d in [2, 4] {
        let m = Quadric::de_sitter(d)?;
        let h = m.euler();
        let pts = m.wedge_sample(&h, 10_000, 2024)?;
        let mut compared = 0usize;
        let mut wrong = 0usize;
        for p in &pts {
            let gap = p.coords[1] - p.coords[0].abs();
            if gap.abs() <= POSITIVITY_MARGIN {
                continue;
            }
            compared += 1;
            wrong += usize::from((gap > 0.0) != p.label);
        }
        let flow = m.flow_invariance_failures(&h, &pts, &times)?.len();
        let positives = pts.iter().filter(|p| p.label).count();
        pass &= wrong == 0 && flow == 0 && positives > 0 && compared > 9_900;
        parts.push(format!("dS^{d}: {wrong}/{compared} wrong, {flow} flow failures"));
    }
    Ok((pass, parts.join("; ")))
}

fn kms_positivity() -> Outcome {
    let m = Quadric::de_sitter(2)?;
    let h = m.euler();
    let kms = KmsTester::new(&m, &h)?;
    let pts: Vec<SpacePoint> = (0..1000).map(|i| m.sample_point(5, i)).collect();
    let coarse = kms.min_margins(&pts, &StripGrid::square(11))?;
    let fine = kms.min_margins(&pts, &StripGrid::square(21))?;
    let mut bad = (0usize, 0usize);
    for (i, p) in pts.iter().enumerate() {
        let pos = m.positivity_domain_contains(&h, p)?.0;
        bad.0 += usize::from((coarse[i] >= CROWN_MARGIN) != pos);
        bad.1 += usize::from((fine[i] >= CROWN_MARGIN) != pos);
    }
    Ok((bad == (0, 0), format!("disagreements 11x11 {}, 21x21 {}", bad.0, bad.1)))
}

fn boundary_orbit_and_crown() -> Outcome {
    let m = Quadric::de_sitter(2)?;
    let h = m.euler();
    let base = crown_base_point(&m);
    let edge = m.flow_complex(&h, Complex::new(0.0, FRAC_PI_2), &base)?;
    let target = [0.0, -1.0, 0.0];
    let orbit_err = edge
        .coords
        .iter()
        .zip(target)
        .map(|(z, t)| (z - Complex::new(t, 0.0)).norm())
        .fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut inside = 0usize;
    for _ in 0..100 {
        let z = Complex::new(rng.random_range(-3.0..3.0), rng.random_range(-(FRAC_PI_2 - 0.01)..FRAC_PI_2 - 0.01));
        if crown_margin(&m, &m.flow_complex(&h, z, &base)?)? > 0.0 {
            inside += 1;
        }
    }
    let approach: Vec<f64> = [1.0, 1.5, 1.56, 1.57, FRAC_PI_2 - 1e-6]
        .iter()
        .map(|&s| crown_margin(&m, &m.flow_complex(&h, Complex::new(0.0, s), &base)?))
        .collect::<Result<_>>()?;
    let decreasing = approach.windows(2).all(|w| w[1] < w[0]);
    let last = *approach.last().unwrap();
    let pass = orbit_err <= 1e-12 && inside == 100 && decreasing && last < 1e-5;
    Ok((
        pass,
        format!("orbit {orbit_err:.1e}, inside {inside}/100, margin at edge {last:.1e}"),
    ))
}

fn group_semigroup() -> Outcome {
    let wedge = GroupWedge::standard(&sl2_euler())?;
    let (rep, worst) = wedge.semigroup_check(1000, 7)?;
    let pass = rep.samples == 1000 && rep.all_passed() && worst >= GROUP_WEDGE_MARGIN;
    Ok((
        pass,
        format!("{} pairs, {} failures, min margin {worst:.3e}", rep.samples, rep.failures.len()),
    ))
}

fn strip_point(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.random_range(-3.0..3.0), rng.random_range(0.05..PI - 0.05))
}

fn strip_golden() -> Outcome {
    let mid = C64::new(0.0, FRAC_PI_2);
    let diag = (strip_kernel(mid, mid)? - 1.0 / (4.0 * PI)).norm();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut conj = 0.0_f64;
    for _ in 0..20 {
        let (z, w, t) = (strip_point(&mut rng), strip_point(&mut rng), rng.random_range(-2.0..2.0));
        // (J K_w)(z) = conj K_w(πi + z̄), evaluated at a translated argument
        let zt = strip_translate(t, z);
        let lhs = strip_kernel(C64::new(0.0, PI) + zt.conj(), w)?.conj();
        conj = conj.max((lhs - strip_kernel(zt, strip_j(w))?).norm());
    }
    let pts: Vec<C64> = (0..50).map(|_| strip_point(&mut rng)).collect();
    let lowest = min_eigenvalue(&gram(KernelModel::Strip, &pts)?);
    let mut orbit = 0.0_f64;
    for t in [0.0, PI / 4.0, -PI / 4.0, 0.4 * PI, -0.4 * PI] {
        orbit = orbit.max((orbit_norm_squared(t)? - 1.0 / (4.0 * PI * (FRAC_PI_2 + t).sin())).abs());
    }
    let pass = diag <= 1e-12 && conj <= 1e-12 && lowest >= -1e-10 && orbit <= 1e-10;
    Ok((
        pass,
        format!("diag {diag:.1e}, J {conj:.1e}, min eig {lowest:.1e}, orbit {orbit:.1e}"),
    ))
}

fn strip_kms() -> Outcome {
    let one = C64::new(1.0, 0.0);
    let mut worst = 0.0_f64;
    for support in [(-1.0, 1.0), (0.0, 2.0), (-3.0, -0.5)] {
        worst = worst.max(hardy::strip_membership(support, one, 2048)?.residual);
    }
    let control = hardy::strip_membership((-1.0, 1.0), C64::new(0.0, 1.0), 2048)?.residual;
    let pass = worst <= 1e-6 && control >= 0.5;
    Ok((pass, format!("real bumps {worst:.1e}, imaginary phase {control:.3}")))
}

fn halfplane_membership() -> Outcome {
    let good = hardy::halfplane_membership((1.0, 2.0), hardy::wedge_phase(), 2048)?.residual;
    let phase_one = hardy::halfplane_membership((1.0, 2.0), C64::new(1.0, 0.0), 2048)?.residual;
    let wrong_wedge = hardy::halfplane_membership((-2.0, -1.0), hardy::wedge_phase(), 2048)?.residual;
    let cal = hardy::calibrate_delta_sign()?;
    let pass = good <= 1e-4 && phase_one >= 0.5 && wrong_wedge >= 0.5 && cal.inversion_residual <= 1e-10;
    Ok((
        pass,
        format!(
            "wedge {good:.1e}, phase 1 {phase_one:.3}, support [-2,-1] {wrong_wedge:.1e}, JDJ {:.1e}",
            cal.inversion_residual
        ),
    ))
}

fn modular_roundtrips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut roundtrip, mut double, mut complement) = (0.0_f64, 0.0_f64, 0.0_f64);
    for k in 0..100 {
        let v = modular::random_standard_subspace(&mut rng, 1 + k % 6);
        let pair = modular::modular_pair_of(&v)?;
        roundtrip = roundtrip.max(modular::standard_from_pair(&pair).distance(&v));
        double = double.max(v.symplectic_complement().symplectic_complement().distance(&v));
    }
    for k in 0..50 {
        let pair = modular::random_modular_pair(&mut rng, 1 + k % 6);
        let v = pair.standard_subspace();
        complement = complement.max(v.symplectic_complement().distance(&pair.dual_standard_subspace()));
    }
    let pass = roundtrip <= 1e-9 && double <= 1e-9 && complement <= 1e-9;
    Ok((
        pass,
        format!("roundtrip {roundtrip:.1e}, (V')' {double:.1e}, V' {complement:.1e}"),
    ))
}

fn affine_net() -> Outcome {
    let rep = hardy::net_checks(&hardy::NetConfig::default())?;
    let worst = |cs: &[hardy::NetCheck]| cs.iter().map(|c| c.residual).fold(0.0, f64::max);
    Ok((
        rep.pass() && rep.isotony.len() == 20,
        format!(
            "isotony {:.1e} ({} pairs), covariance {:.1e}, membership {:.1e} ({} vectors), cyclic {}",
            worst(&rep.isotony),
            rep.isotony.len(),
            worst(&rep.covariance),
            worst(&rep.membership),
            rep.membership.len(),
            rep.reeh_schlieder.pass
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("sl2 structure", sl2_structure),
        ("grading dimensions", grading_dimensions),
        ("elliptic/hyperbolic dichotomy", elliptic_hyperbolic),
        ("de Sitter wedge oracle", de_sitter_oracle),
        ("KMS domain equals positivity domain", kms_positivity),
        ("boundary orbit and crown", boundary_orbit_and_crown),
        ("group-type wedge semigroup", group_semigroup),
        ("strip kernel golden values", strip_golden),
        ("strip KMS membership", strip_kms),
        ("half-plane membership", halfplane_membership),
        ("modular roundtrips", modular_roundtrips),
        ("affine net", affine_net),
    ];
    let mut failed = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match check() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        let secs = start.elapsed().as_secs_f64();
        println!(
            "{} {:>2} {name}: {detail} [{secs:.2}s]",
            if pass { "PASS" } else { "FAIL" },
            k + 1
        );
        if !pass {
            failed.push(k + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
