use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use wedgelab::causal::{
    sl2_euler, GroupWedge, KmsTester, Quadric, SpacePoint, StripGrid, CROWN_MARGIN, POSITIVITY_MARGIN,
};
use wedgelab::hardy::{
    self, affine_action, boundary_gram, gram, halfplane_j, halfplane_kernel, min_eigenvalue,
    orbit_norm_squared, strip_j, strip_kernel, strip_translate, KernelModel, KernelVector, C64,
};
use wedgelab::lie::{self, builtin, AlgebraDocument, AlgebraElement, LieAlgebra};
use wedgelab::modular::{self, ModularPairDocument};

use crate::report::{float, Check, Report};
use crate::{
    AlgebraAction, AlgebraArgs, Cli, Command, ElementArgs, EulerAction, KernelAction, KmsAction,
    MembershipArgs, MembershipModel, Model, ModularAction, NetAction, Space, WedgeAction,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] wedgelab::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Config(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Runs one subcommand; `Ok(true)` when every check passed.
pub fn run(cli: &Cli) -> Result<bool> {
    let seed = cli.common.seed;
    let csv = cli.common.csv.as_deref();
    let report = match &cli.command {
        Command::Algebra {
            action: AlgebraAction::Check(args),
        } => algebra_check(args)?,
        Command::Euler {
            action: EulerAction::Check(args),
        } => euler_check(args)?,
        Command::Grading(args) => grading(args)?,
        Command::Cone { samples } => cone(*samples, seed)?,
        Command::Wedge {
            action: WedgeAction::Sample { space, dim, count },
        } => wedge_sample(*space, *dim, *count, seed, csv)?,
        Command::Kms {
            action:
                KmsAction::Sample {
                    dim,
                    count,
                    grid,
                    fine_grid,
                },
        } => kms_sample(*dim, *count, *grid, *fine_grid, seed)?,
        Command::Semigroup { count } => semigroup(*count, seed)?,
        Command::Kernel {
            action: KernelAction::Gram { model, points, eps },
        } => kernel_gram(*model, *points, eps, seed)?,
        Command::Kernel {
            action: KernelAction::Identities { model, samples },
        } => kernel_identities(*model, *samples, seed)?,
        Command::Membership { model } => membership(model, csv)?,
        Command::Net {
            action: NetAction::Check { pairs, finest, nodes },
        } => net_check(*pairs, *finest, *nodes, seed)?,
        Command::Modular {
            action: ModularAction::Roundtrip { count, max_n, pairs },
        } => modular_roundtrip(*count, *max_n, *pairs, seed)?,
        Command::Validate { path } => validate(path)?,
    };
    let mut report = report;
    if let Value::Object(cfg) = &mut report.config {
        cfg.entry("seed").or_insert(json!(seed));
    }
    // validate speaks plain text on stdout; its JSON report goes to --out only
    let quiet = matches!(cli.command, Command::Validate { .. });
    if !quiet || cli.common.out.is_some() {
        report.emit(cli.common.out.as_deref())?;
    }
    Ok(report.pass())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn load_algebra(args: &AlgebraArgs) -> Result<Arc<LieAlgebra>> {
    match (&args.algebra, &args.file) {
        (Some(name), None) => Ok(builtin::by_name(name)?),
        (None, Some(path)) => Ok(LieAlgebra::from_json(&read(path)?)?),
        _ => Err(CliError::Config("give exactly one of --algebra or --file".into())),
    }
}

fn algebra_label(args: &AlgebraArgs) -> Value {
    match (&args.algebra, &args.file) {
        (Some(name), _) => json!({ "algebra": name }),
        (_, Some(path)) => json!({ "file": path }),
        _ => Value::Null,
    }
}

fn load_element(args: &ElementArgs) -> Result<AlgebraElement> {
    let alg = load_algebra(&args.algebra)?;
    match (&args.element, &args.coeffs) {
        (Some(name), None) => Ok(builtin::named_element(&alg, name)?),
        (None, Some(c)) if c.len() == alg.dim() => Ok(alg.element(c)),
        (None, Some(c)) => Err(CliError::Config(format!(
            "{} coefficients given for an algebra of dimension {}",
            c.len(),
            alg.dim()
        ))),
        _ => Err(CliError::Config("give exactly one of --element or --coeffs".into())),
    }
}

fn element_config(args: &ElementArgs) -> Value {
    let mut v = algebra_label(&args.algebra);
    v["element"] = json!(args.element);
    v["coeffs"] = json!(args.coeffs);
    v
}

fn algebra_check(args: &AlgebraArgs) -> Result<Report> {
    let alg = load_algebra(args)?;
    let tol = alg.tolerance().max(lie::DEFAULT_TOLERANCE);
    let mut config = algebra_label(args);
    config["tolerance"] = json!(tol);
    let mut r = Report::new("algebra check", config);
    r.set("name", alg.name());
    r.set("dim", alg.dim());
    r.set("matrix_size", alg.matrix_size());
    r.check(Check::below("antisymmetry", alg.antisymmetry_residual(), tol));
    r.check(Check::below("jacobi", alg.jacobi_residual(), tol));
    Ok(r)
}

fn euler_check(args: &ElementArgs) -> Result<Report> {
    let h = load_element(args)?;
    let mut config = element_config(args);
    config["cluster_tolerance"] = json!(lie::CLUSTER_TOL);
    let mut r = Report::new("euler check", config);
    let euler = lie::is_euler(&h);
    r.set("is_euler", euler);
    if euler {
        let (m, z, p) = lie::grading(&h)?.dims();
        r.set("grading_dims", [m, z, p]);
    }
    r.check(Check::flag("is_euler", euler));
    Ok(r)
}

fn grading(args: &ElementArgs) -> Result<Report> {
    let h = load_element(args)?;
    let g = lie::grading(&h)?;
    let mut config = element_config(args);
    config["rank_tolerance"] = json!(lie::GRADING_RANK_TOL);
    let mut r = Report::new("grading", config);
    let (m, z, p) = g.dims();
    r.set("dims", json!({ "-1": m, "0": z, "1": p }));
    r.check(Check::below("projection_residual", g.projection_residual(), 1e-9));
    r.check(Check::below("bracket_residual", g.bracket_residual(), 1e-9));
    Ok(r)
}

fn cone(samples: usize, seed: u64) -> Result<Report> {
    let alg = builtin::sl2();
    let c = wedgelab::causal::invariant_cone(&alg, samples, seed)?;
    let mut r = Report::new("cone", json!({ "algebra": "sl2", "samples": samples, "seed": seed }));
    r.set("generators", c.generators().len());
    r.check(Check::flag("pointed", c.is_pointed()));
    r.check(Check::flag("generating", c.is_generating()));
    let dual = c.dual()?;
    let bidual = dual.dual()?;
    r.check(Check::flag("bidual_contains_cone", bidual.contains_cone(&c)));
    r.check(Check::flag("cone_contains_bidual", c.contains_cone(&bidual)));
    let seed_elem = alg.element(&[0.0, 1.0, -1.0]);
    r.check(Check::flag("elliptic_seed_interior", c.contains_interior(&seed_elem)));
    let hyperbolic = alg.element(&[0.0, 1.0, 1.0]);
    r.check(Check::flag("hyperbolic_outside", !c.contains(&hyperbolic)));
    Ok(r)
}

fn wedge_sample(space: Space, dim: usize, count: usize, seed: u64, csv: Option<&Path>) -> Result<Report> {
    let model = match space {
        Space::Ds => Quadric::de_sitter(dim)?,
        Space::Ads => Quadric::anti_de_sitter(dim)?,
    };
    let h = model.euler();
    let points = model.wedge_sample(&h, count, seed)?;
    let times = [-1.0, -0.5, 0.5, 1.0];
    let mut r = Report::new(
        "wedge sample",
        json!({
            "space": model.kind(), "dim": dim, "count": count, "seed": seed,
            "margin": POSITIVITY_MARGIN, "flow_times": times,
        }),
    );
    let positives = points.iter().filter(|p| p.label).count();
    r.set("positives", positives);
    if space == Space::Ds {
        let mut compared = 0usize;
        let mut disagreements = 0usize;
        for p in &points {
            let gap = p.coords[1] - p.coords[0].abs();
            if gap.abs() <= POSITIVITY_MARGIN {
                continue;
            }
            compared += 1;
            if (gap > 0.0) != p.label {
                disagreements += 1;
            }
        }
        r.set("oracle_compared", compared);
        r.check(Check::below("oracle_disagreements", disagreements as f64, 0.0));
    }
    let failures = model.flow_invariance_failures(&h, &points, &times)?;
    r.check(Check::below("flow_invariance_failures", failures.len() as f64, 0.0));
    r.check(Check::flag("nonempty", positives > 0));
    if let Some(path) = csv {
        let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut head = vec!["model".to_string(), "d".to_string()];
        head.extend((0..model.ambient_dim()).map(|k| format!("x{k}")));
        head.push("label".into());
        head.push("margin".into());
        w.write_record(&head).map_err(csv_err)?;
        for p in &points {
            let mut row = vec![model.kind().to_string(), dim.to_string()];
            row.extend(p.coords.iter().map(|&x| float(x)));
            row.push(p.label.to_string());
            row.push(float(p.margin));
            w.write_record(&row).map_err(csv_err)?;
        }
        w.flush().map_err(|e| CliError::io(path, e))?;
    }
    Ok(r)
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Config(format!("csv: {e}"))
}

fn kms_sample(dim: usize, count: usize, grid: usize, fine: usize, seed: u64) -> Result<Report> {
    let model = Quadric::de_sitter(dim)?;
    let h = model.euler();
    let tester = KmsTester::new(&model, &h)?;
    let pts: Vec<SpacePoint> = (0..count).map(|i| model.sample_point(seed, i)).collect();
    let coarse = tester.min_margins(&pts, &StripGrid::square(grid))?;
    let refined = tester.min_margins(&pts, &StripGrid::square(fine))?;
    let mut coarse_bad = 0usize;
    let mut fine_bad = 0usize;
    for (i, p) in pts.iter().enumerate() {
        let pos = model.positivity_domain_contains(&h, p)?.0;
        coarse_bad += usize::from((coarse[i] >= CROWN_MARGIN) != pos);
        fine_bad += usize::from((refined[i] >= CROWN_MARGIN) != pos);
    }
    let mut r = Report::new(
        "kms sample",
        json!({
            "space": "ds", "dim": dim, "count": count, "seed": seed,
            "grid": grid, "fine_grid": fine, "crown_margin": CROWN_MARGIN,
        }),
    );
    r.set("orientation", tester.orientation());
    r.check(Check::below("disagreements_coarse", coarse_bad as f64, 0.0));
    r.check(Check::below("disagreements_fine", fine_bad as f64, 0.0));
    Ok(r)
}

fn semigroup(count: usize, seed: u64) -> Result<Report> {
    let wedge = GroupWedge::standard(&sl2_euler())?;
    let (rep, worst) = wedge.semigroup_check(count, seed)?;
    let mut r = Report::new(
        "semigroup",
        json!({ "group": "SL(2,R)", "count": count, "seed": seed,
                "margin": wedgelab::causal::GROUP_WEDGE_MARGIN }),
    );
    r.set("passes", rep.passes);
    r.set("min_margin", worst);
    r.check(Check::below("failures", rep.failures.len() as f64, 0.0));
    Ok(r)
}

fn kernel_model(m: Model) -> KernelModel {
    match m {
        Model::Strip => KernelModel::Strip,
        Model::Halfplane => KernelModel::HalfPlane,
    }
}

fn interior_point(model: KernelModel, rng: &mut ChaCha8Rng) -> C64 {
    let x = rng.random_range(-3.0..3.0);
    let y = match model {
        KernelModel::Strip => rng.random_range(0.05..PI - 0.05),
        KernelModel::HalfPlane => rng.random_range(0.05..3.0),
    };
    C64::new(x, y)
}

fn kernel_gram(model: Model, points: usize, eps: &[f64], seed: u64) -> Result<Report> {
    let km = kernel_model(model);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<C64> = (0..points).map(|_| interior_point(km, &mut rng)).collect();
    let g = gram(km, &pts)?;
    let mut r = Report::new(
        "kernel gram",
        json!({ "model": km, "points": points, "seed": seed, "eps": eps, "boundary_points": 32 }),
    );
    let mut herm = 0.0_f64;
    for i in 0..points {
        for j in 0..points {
            herm = herm.max((g[(i, j)] - g[(j, i)].conj()).norm());
        }
    }
    r.check(Check::below("hermitian", herm, 1e-12));
    r.check(Check::above("min_eigenvalue", min_eigenvalue(&g), -1e-10));
    if km == KernelModel::Strip {
        let xs: Vec<f64> = (0..32).map(|_| rng.random_range(-5.0..5.0)).collect();
        for &e in eps {
            let b = boundary_gram(&xs, e)?;
            r.check(Check::above(format!("boundary_min_eigenvalue[eps={e}]"), min_eigenvalue(&b), -1e-8));
        }
    }
    Ok(r)
}

fn kernel_identities(model: Model, samples: usize, seed: u64) -> Result<Report> {
    let km = kernel_model(model);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = Report::new("kernel identities", json!({ "model": km, "samples": samples, "seed": seed }));
    let quarter = 1.0 / (4.0 * PI);
    match km {
        KernelModel::Strip => {
            let base = C64::new(0.0, PI / 2.0);
            r.check(Check::below("diagonal_golden", (strip_kernel(base, base)? - quarter).norm(), 1e-12));
            let mut conj = 0.0_f64;
            let mut shift = 0.0_f64;
            for _ in 0..samples {
                let z = interior_point(km, &mut rng);
                let w = interior_point(km, &mut rng);
                let t = rng.random_range(-2.0..2.0);
                let lhs = strip_kernel(C64::new(0.0, PI) + z.conj(), w)?.conj();
                conj = conj.max((lhs - strip_kernel(z, strip_j(w))?).norm());
                shift = shift.max((strip_kernel(z + t, w)? - strip_kernel(z, strip_translate(t, w))?).norm());
            }
            r.check(Check::below("conjugation", conj, 1e-12));
            r.check(Check::below("translation", shift, 1e-12));
            let mut orbit = 0.0_f64;
            for t in [0.0, PI / 4.0, -PI / 4.0, 0.4 * PI, -0.4 * PI] {
                orbit = orbit.max((orbit_norm_squared(t)? - 1.0 / (4.0 * PI * (PI / 2.0 + t).sin())).abs());
            }
            r.check(Check::below("orbit_norm", orbit, 1e-10));
        }
        KernelModel::HalfPlane => {
            let i = C64::new(0.0, 1.0);
            r.check(Check::below("diagonal_golden", (halfplane_kernel(i, i)? - quarter).norm(), 1e-12));
            let pts: Vec<C64> = (0..16).map(|_| interior_point(km, &mut rng)).collect();
            let singles: Vec<KernelVector> = pts
                .iter()
                .map(|&w| KernelVector::new(km, vec![C64::new(1.0, 0.0)], vec![w]))
                .collect::<wedgelab::Result<_>>()?;
            let mut gram_err = 0.0_f64;
            let mut j_err = 0.0_f64;
            let moved: Vec<KernelVector> = singles
                .iter()
                .map(|v| affine_action(0.7, 2.0, v))
                .collect::<wedgelab::Result<_>>()?;
            for a in 0..singles.len() {
                for b in 0..singles.len() {
                    let d = moved[a].inner(&moved[b])? - singles[a].inner(&singles[b])?;
                    gram_err = gram_err.max(d.norm());
                }
                let jv = halfplane_j(&singles[a])?;
                j_err = j_err.max((jv.norm_squared()? - singles[a].norm_squared()?).abs());
                let jjv = halfplane_j(&jv)?;
                j_err = j_err.max((jjv.points[0] - singles[a].points[0]).norm());
            }
            r.check(Check::below("affine_gram", gram_err, 1e-10));
            r.check(Check::below("conjugation", j_err, 1e-12));
            let id = affine_action(0.0, 1.0, &singles[0])?;
            r.check(Check::flag("identity_action", id == singles[0]));
        }
    }
    Ok(r)
}

fn parse_phase(s: Option<&str>, default: C64) -> Result<C64> {
    match s {
        None => Ok(default),
        Some("one") | Some("1") => Ok(C64::new(1.0, 0.0)),
        Some("i") => Ok(C64::new(0.0, 1.0)),
        Some("wedge") => Ok(hardy::wedge_phase()),
        Some(other) => other
            .parse::<f64>()
            .map(|t| C64::from_polar(1.0, t))
            .map_err(|_| CliError::Config(format!("unknown phase '{other}'"))),
    }
}

fn membership(model: &MembershipModel, csv: Option<&Path>) -> Result<Report> {
    let (args, km, default_support, default_phase): (&MembershipArgs, _, _, _) = match model {
        MembershipModel::Strip(a) => (a, KernelModel::Strip, (-1.0, 1.0), C64::new(1.0, 0.0)),
        MembershipModel::Halfplane(a) => (a, KernelModel::HalfPlane, (1.0, 2.0), hardy::wedge_phase()),
    };
    let support = match &args.support {
        Some(v) => (v[0], v[1]),
        None => default_support,
    };
    let phase = parse_phase(args.phase.as_deref(), default_phase)?;
    let (rep, tol) = match km {
        KernelModel::Strip => (hardy::strip_membership(support, phase, args.nodes)?, hardy::STRIP_KMS_TOL),
        KernelModel::HalfPlane => (hardy::halfplane_membership(support, phase, args.nodes)?, hardy::HALFPLANE_TOL),
    };
    let mut config = json!({
        "model": km, "support": [support.0, support.1], "nodes": args.nodes,
        "phase": [phase.re, phase.im], "tolerance": tol,
    });
    if km == KernelModel::HalfPlane {
        config["mellin_grid"] = json!(hardy::MellinGrid::default());
        config["delta_sign"] = json!(hardy::DELTA_SIGN);
    }
    let mut r = Report::new("membership", config);
    r.set("membership", &rep);
    r.check(Check::below("residual", rep.residual, tol));
    if let Some(path) = csv {
        let pts = match km {
            KernelModel::Strip => hardy::strip_evaluation_set(),
            KernelModel::HalfPlane => hardy::halfplane_evaluation_set(),
        };
        let xi = hardy::SmearedVector::bump(km, support, args.nodes)?.with_phase(phase);
        let vals = xi.eval_on(&pts)?;
        let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
        hardy::write_values_csv(&pts, &vals, file)?;
    }
    Ok(r)
}

fn net_check(pairs: usize, finest: i32, nodes: usize, seed: u64) -> Result<Report> {
    let cfg = hardy::NetConfig {
        seed,
        pairs,
        finest,
        nodes,
        ..Default::default()
    };
    let rep = hardy::net_checks(&cfg)?;
    let mut r = Report::new(
        "net check",
        json!({ "net": cfg, "tolerance": hardy::NET_TOL, "membership_tolerance": hardy::HALFPLANE_TOL }),
    );
    for (group, checks) in [
        ("isotony", &rep.isotony),
        ("covariance", &rep.covariance),
        ("membership", &rep.membership),
    ] {
        for c in checks {
            r.check(Check {
                name: format!("{group}: {}", c.label),
                pass: c.pass,
                value: Some(c.residual),
                tolerance: None,
            });
        }
    }
    r.check(Check::flag(
        format!("reeh_schlieder: {}", rep.reeh_schlieder.label),
        rep.reeh_schlieder.pass,
    ));
    Ok(r)
}

fn modular_roundtrip(count: usize, max_n: usize, pairs: usize, seed: u64) -> Result<Report> {
    if max_n == 0 {
        return Err(CliError::Config("--max-n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut roundtrip = 0.0_f64;
    let mut double = 0.0_f64;
    for k in 0..count {
        let n = 1 + k % max_n;
        let v = modular::random_standard_subspace(&mut rng, n);
        let pair = modular::modular_pair_of(&v)?;
        roundtrip = roundtrip.max(modular::standard_from_pair(&pair).distance(&v));
        double = double.max(v.symplectic_complement().symplectic_complement().distance(&v));
    }
    let mut complement = 0.0_f64;
    for k in 0..pairs {
        let n = 1 + k % max_n;
        let pair = modular::random_modular_pair(&mut rng, n);
        let v = pair.standard_subspace();
        complement = complement.max(v.symplectic_complement().distance(&pair.dual_standard_subspace()));
    }
    let mut r = Report::new(
        "modular roundtrip",
        json!({ "count": count, "max_n": max_n, "pairs": pairs, "seed": seed, "tolerance": 1e-9 }),
    );
    r.check(Check::below("roundtrip_distance", roundtrip, 1e-9));
    r.check(Check::below("double_complement", double, 1e-9));
    r.check(Check::below("complement_vs_fixed_space", complement, 1e-9));
    Ok(r)
}

fn validate(path: &Path) -> Result<Report> {
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let mut r = Report::new("validate", json!({ "path": path }));
    let (kind, outcome) = if value.get("lambdas").is_some() || value.get("pairing").is_some() {
        let res = ModularPairDocument::parse(&text).and_then(|d| d.to_pair().map(|_| ()));
        ("modular_pair", res)
    } else {
        let res = AlgebraDocument::parse(&text).and_then(|d| LieAlgebra::from_document(&d).map(|_| ()));
        ("algebra", res)
    };
    r.set("kind", kind);
    match outcome {
        Ok(()) => {
            println!("ok");
            r.check(Check::flag("valid", true));
        }
        Err(e) => {
            println!("{e}");
            r.set("diagnostic", e.to_string());
            r.check(Check::flag("valid", false));
        }
    }
    Ok(r)
}
