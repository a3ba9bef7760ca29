//! Dispatch from a config to the verification it names.

use dirac_core::clifford::CliffordElement;
use dirac_core::dirac::{
    casimir_on_cohomology, cocycle_check, dirac_cohomology, harish_chandra_diagram,
    lambda_with_vanishing_hp, multiplet_check, nonvanishing_check, predicted_constant, r_roots,
    square_constant, verify_square_identity, DiracComplex, DiracError, Status,
};
use dirac_core::liestruct::{LieAlgebra, LiePair};
use dirac_core::linalg::Q;
use dirac_core::repmod::{build_irrep, build_truncated_verma, RepError, WeightModule};
use dirac_core::rootdata::{coset_transversal, CartanMatrix, RootDataError, RootSystem, WeylGroup};
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::cache::Cache;
use crate::config::{Command, ExperimentConfig, WeightBasis};
use crate::report::{nj, qj, r_fundamental, sparse_j, vj};
use crate::{CliError, CONVENTION_VERSION};

const DEFAULT_DEPTH: usize = 4;
const DEFAULT_SAMPLES: usize = 20;

/// Errors that mean "could not decide within the limits" rather than a
/// bad request.
fn is_inconclusive(e: &DiracError) -> bool {
    matches!(
        e,
        DiracError::DepthLeak(_)
            | DiracError::Rep(RepError::DepthLeak(_))
            | DiracError::Rep(RepError::DimensionCapExceeded { .. })
            | DiracError::RootData(RootDataError::GroupTooLarge { .. })
    )
}

fn status_j(s: Status) -> Value {
    Value::String(s.as_str().into())
}

pub fn build_algebra(label: &str) -> Result<LieAlgebra, CliError> {
    let cm =
        CartanMatrix::from_type(label).map_err(|e| CliError::config("algebra", e.to_string()))?;
    let rs = RootSystem::build(&cm)?;
    Ok(LieAlgebra::build(&rs)?)
}

/// `λ` in simple-root coordinates.
pub fn resolve_lambda(cfg: &ExperimentConfig, pair: &LiePair) -> Result<Vec<Q>, CliError> {
    let rs = pair.g.root_system();
    let Some(spec) = &cfg.lambda else {
        return Ok(vec![Q::zero(); rs.rank()]);
    };
    let coords: Vec<Q> = spec.coords.iter().map(|r| r.0.clone()).collect();
    let want = match spec.basis {
        WeightBasis::ShiftedHr => pair.dim_hr(),
        _ => rs.rank(),
    };
    if coords.len() != want {
        return Err(CliError::config(
            "lambda.coords",
            format!("expected {want} coordinates, found {}", coords.len()),
        ));
    }
    Ok(match spec.basis {
        WeightBasis::SimpleRoot => coords,
        WeightBasis::Fundamental => rs.from_dynkin_labels(&coords),
        WeightBasis::ShiftedHr => lambda_with_vanishing_hp(pair, &coords),
    })
}

pub fn pair_summary(pair: &LiePair, group_cap: usize) -> Result<Value, DiracError> {
    let b = &pair.blocks;
    let mut m = Map::new();
    m.insert("dim_g".into(), nj(pair.g.dim()));
    m.insert("dim_r".into(), nj(pair.dim_r()));
    m.insert("dim_p".into(), nj(pair.dim_p()));
    m.insert("dim_h_r".into(), nj(pair.dim_hr()));
    m.insert("dim_h_p".into(), nj(pair.dim_hp()));
    m.insert("card_delta0_plus".into(), nj(pair.delta0_pos.len()));
    m.insert("card_gamma_plus".into(), nj(pair.gamma_plus.len()));
    m.insert(
        "gamma_plus".into(),
        Value::Array(pair.gamma_plus.iter().map(|g| vj(g)).collect()),
    );
    let q_len = b.m_p_minus().len() + b.hp.len();
    m.insert("dim_spin_ideal".into(), nj(1u128 << q_len));
    m.insert("equal_rank".into(), Value::Bool(pair.is_equal_rank()));
    m.insert("f_r".into(), vj(&pair.f_r));
    m.insert("rho_p".into(), vj(&pair.rho.rho_p));
    m.insert("rho_r".into(), vj(&pair.rho.rho_r));
    if pair.is_equal_rank() {
        let rs = pair.g.root_system();
        let w = WeylGroup::build_with_cap(rs, group_cap)?;
        let cs = coset_transversal(&w, rs, &r_roots(pair))?;
        m.insert("euler_number".into(), nj(cs.euler_number));
        m.insert("weyl_order".into(), nj(w.order()));
    }
    Ok(Value::Object(m))
}

/// Irreducible module when `λ` is dominant integral, else a truncated Verma
/// module of the given depth.
fn module_for(
    pair: &LiePair,
    lambda: &[Q],
    depth: usize,
    cap: usize,
) -> Result<WeightModule, DiracError> {
    if pair.g.root_system().is_dominant_integral(lambda) {
        Ok(build_irrep(&pair.g, lambda, cap)?)
    } else {
        Ok(build_truncated_verma(&pair.g, lambda, depth, cap)?)
    }
}

fn check_size(module: &WeightModule, pair: &LiePair, cap: usize) -> Result<(), DiracError> {
    let b = &pair.blocks;
    let dl = 1u128 << (b.m_p_minus().len() + b.hp.len());
    let total = module.dim() as u128 * dl;
    if total > cap as u128 {
        return Err(RepError::DimensionCapExceeded { dim: total, cap }.into());
    }
    Ok(())
}

fn constituents_j(pair: &LiePair, list: &[(Vec<Q>, usize, Option<u128>)]) -> Value {
    let rd = pair.r_root_data();
    Value::Array(
        list.iter()
            .map(|(w, mult, dim)| {
                let mut m = Map::new();
                m.insert("fundamental".into(), vj(&r_fundamental(&rd, w)));
                m.insert("h_r".into(), vj(w));
                m.insert("multiplicity".into(), nj(mult));
                if let Some(d) = dim {
                    m.insert("dim".into(), nj(d));
                }
                Value::Object(m)
            })
            .collect(),
    )
}

fn multiplets(
    cfg: &ExperimentConfig,
    pair: &LiePair,
    lambda: &[Q],
) -> Result<(Status, Value), DiracError> {
    let r = multiplet_check(pair, lambda, cfg.caps.max_dim, cfg.caps.group_order)?;
    let rd = pair.r_root_data();
    let found: Vec<_> = r
        .cohomology
        .iter()
        .map(|(w, m)| (w.clone(), *m, Some(rd.weyl_dimension(w))))
        .map(|(w, m, d)| (w, m, d.map(|d| d.to_integer().try_into().unwrap_or(0u128))))
        .collect();
    let predicted: Vec<_> = r.predicted.iter().map(|w| (w.clone(), 1, None)).collect();
    let witness = json!({
        "constituents": constituents_j(pair, &found),
        "predicted": constituents_j(pair, &predicted),
        "predicted_full": Value::Array(r.predicted_full.iter().map(|w| vj(w)).collect()),
        "euler_number": nj(r.euler_number),
        "cohomology_dim": nj(r.cohomology_dim),
        "predicted_dim": qj(&r.predicted_dim),
        "distinct": r.distinct,
        "kernel_is_kernel_of_square": r.kernel_is_kernel_of_square,
    });
    Ok((r.status, witness))
}

fn cohomology(
    cfg: &ExperimentConfig,
    pair: &LiePair,
    lambda: &[Q],
) -> Result<(Status, Value), CliError> {
    if !pair.g.root_system().is_dominant_integral(lambda) {
        return Err(CliError::config(
            "lambda",
            "cohomology needs a dominant integral weight",
        ));
    }
    let module = build_irrep(&pair.g, lambda, cfg.caps.max_dim).map_err(DiracError::from)?;
    check_size(&module, pair, cfg.caps.max_dim)?;
    let cx = DiracComplex::build(pair, &module)?;
    let sq = verify_square_identity(&cx);
    let coh = dirac_cohomology(&cx)?;
    let c = square_constant(&cx)?;
    let cas = casimir_on_cohomology(&cx, &coh, &-c)?;
    let found: Vec<_> = coh
        .r_structure
        .constituents
        .iter()
        .map(|c| (c.highest_weight.clone(), c.multiplicity, Some(c.dim)))
        .collect();
    let mut parts = vec![sq.status, cas.status];
    if pair.is_equal_rank() {
        parts.push(Status::from_bool(coh.kernel_is_kernel_of_square));
    }
    let witness = json!({
        "dim_module": nj(module.dim()),
        "dim_spin_ideal": nj(cx.ideal.dim()),
        "dim_kernel": nj(coh.kernel_basis.len()),
        "dim_kernel_image": nj(coh.image_intersection_basis.len()),
        "dim_cohomology": nj(coh.dim),
        "kernel_is_kernel_of_square": coh.kernel_is_kernel_of_square,
        "constituents": constituents_j(pair, &found),
        "casimir_identity": cas.operator_identity,
    });
    Ok((Status::all(parts), witness))
}

fn hp_basis(pair: &LiePair) -> Vec<(Vec<usize>, CliffordElement)> {
    let hp: Vec<usize> = pair.blocks.hp.clone().collect();
    let n = pair.dim_p();
    (0..1usize << hp.len())
        .map(|mask| {
            let idx: Vec<usize> = hp
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &i)| i)
                .collect();
            let a = CliffordElement::monomial(n, &idx, Q::from_integer(1.into()));
            (idx, a)
        })
        .collect()
}

fn cocycle(
    cfg: &ExperimentConfig,
    pair: &LiePair,
    lambda: &[Q],
) -> Result<(Status, Value), DiracError> {
    let depth = cfg.depth.unwrap_or(DEFAULT_DEPTH);
    let module = build_truncated_verma(&pair.g, lambda, depth, cfg.caps.max_dim)?;
    check_size(&module, pair, cfg.caps.max_dim)?;
    let cx = DiracComplex::build(pair, &module)?;
    let mut statuses = Vec::new();
    let mut rows = Vec::new();
    for (idx, a) in hp_basis(pair) {
        let r = cocycle_check(&cx, &a)?;
        statuses.push(r.status);
        rows.push(json!({
            "a": Value::Array(idx.iter().map(nj).collect()),
            "image": sparse_j(&r.image),
            "image_is_zero": r.is_zero,
            "theorem": r.theorem,
            "lemma_prime": r.lemma_prime,
            "lemma_cubic0": r.lemma_cubic0,
            "lemma_cubic1": r.lemma_cubic1,
        }));
    }
    let vanishing = dirac_core::dirac::vanishes_on_hp(
        pair,
        &lambda
            .iter()
            .zip(pair.g.root_system().rho())
            .map(|(a, b)| a + b)
            .collect::<Vec<_>>(),
    );
    let witness = json!({
        "depth": nj(depth),
        "vanishing_case": vanishing,
        "elements": rows,
    });
    Ok((Status::all(statuses), witness))
}

fn square_identity(
    cfg: &ExperimentConfig,
    pair: &LiePair,
    lambda: &[Q],
) -> Result<(Status, Value), DiracError> {
    let depth = cfg.depth.unwrap_or(DEFAULT_DEPTH);
    let module = module_for(pair, lambda, depth, cfg.caps.max_dim)?;
    check_size(&module, pair, cfg.caps.max_dim)?;
    let cx = DiracComplex::build(pair, &module)?;
    let r = verify_square_identity(&cx);
    let witness = json!({
        "module": serde_json::to_value(module.kind()).expect("kind serializes"),
        "dim": nj(cx.dim()),
        "scalar": r.scalar.as_ref().map(qj),
        "predicted": qj(&r.predicted),
        "offending": r.offending.as_ref().map(|(i, j, x)| json!([nj(i), nj(j), qj(x)])),
        "unknown_columns": nj(r.unknown_columns),
    });
    Ok((r.status, witness))
}

fn hc_diagram(
    cfg: &ExperimentConfig,
    pair: &LiePair,
    lambda: &[Q],
) -> Result<(Status, Value), DiracError> {
    let hc = harish_chandra_diagram(pair, cfg.samples.unwrap_or(DEFAULT_SAMPLES))?;
    let mut parts = vec![Status::from_bool(hc.all_equal)];
    let samples: Vec<Value> = hc
        .samples
        .iter()
        .map(|s| json!({"lambda": vj(&s.lambda), "lhs": qj(&s.lhs), "rhs": qj(&s.rhs)}))
        .collect();
    let mut operator = Value::Null;
    if cfg.lambda.is_some() && pair.g.root_system().is_dominant_integral(lambda) {
        let module = build_irrep(&pair.g, lambda, cfg.caps.max_dim)?;
        check_size(&module, pair, cfg.caps.max_dim)?;
        let cx = DiracComplex::build(pair, &module)?;
        let coh = dirac_cohomology(&cx)?;
        let r = casimir_on_cohomology(&cx, &coh, &hc.eta_constant)?;
        parts.push(r.status);
        operator = json!({
            "identity_holds": r.operator_identity,
            "cas_g": qj(&r.cas_g_scalar),
            "zeta_cas_r": Value::Array(r.zeta_scalars.iter().map(|(w, s)| json!({"h_r": vj(w), "scalar": qj(s)})).collect()),
        });
    }
    let witness = json!({
        "square_constant": qj(&hc.square_constant),
        "predicted_constant": qj(&predicted_constant(pair)),
        "eta_constant": qj(&hc.eta_constant),
        "grid_step": qj(&hc.grid_step),
        "sample_count": nj(hc.samples.len()),
        "all_equal": hc.all_equal,
        "samples": samples,
        "operator_check": operator,
    });
    Ok((Status::all(parts), witness))
}

fn nonvanishing(
    cfg: &ExperimentConfig,
    pair: &LiePair,
    lambda: &[Q],
) -> Result<(Status, Value), CliError> {
    let n = cfg.depth.unwrap_or(DEFAULT_DEPTH);
    let r = match nonvanishing_check(pair, lambda, n, cfg.caps.max_dim) {
        Err(DiracError::Precondition(m)) => return Err(CliError::config("lambda", m)),
        other => other?,
    };
    let witness = json!({
        "k": nj(r.k),
        "dim_e": nj(r.dim_e),
        "expected_dim_e": nj(1u128 << r.k),
        "cocycles_in_kernel": r.cocycles_ok,
        "m_stable": r.stable,
        "checked_vectors": nj(r.checked),
        "verified_depth": nj(r.verified_depth),
        "internal_depth": nj(r.internal_depth),
    });
    Ok((r.status, witness))
}

/// Result of one run: the deterministic report and bookkeeping that is kept
/// out of it.
#[derive(Debug)]
pub struct Outcome {
    pub report: Value,
    pub status: Status,
    pub cache_hits: usize,
    pub cache_misses: usize,
}

fn stage<E: Into<CliError>>(
    cache: Option<&Cache>,
    key: &Value,
    compute: impl FnOnce() -> Result<Value, E>,
) -> Result<Value, CliError> {
    let f = || compute().map_err(Into::into);
    match cache {
        Some(c) => c.get_or_insert(&key.to_string(), f),
        None => f(),
    }
}

fn payload(r: Result<(Status, Value), CliError>) -> Result<Value, CliError> {
    match r {
        Ok((s, w)) => Ok(json!({"status": status_j(s), "witness": w})),
        Err(CliError::Domain(e)) if is_inconclusive(&e) => Ok(json!({
            "status": status_j(Status::Inconclusive),
            "witness": {"error": e.to_string()},
        })),
        Err(e) => Err(e),
    }
}

pub fn run_experiment(cfg: &ExperimentConfig, cache: Option<&Cache>) -> Result<Outcome, CliError> {
    let (h0, m0) = cache.map_or((0, 0), |c| (c.hits(), c.misses()));
    let g = build_algebra(&cfg.algebra)?;
    let spec = cfg.subalgebra.to_spec(g.rank())?;
    let pair = LiePair::build(&g, &spec)?;
    let lambda = resolve_lambda(cfg, &pair)?;

    let mut echo = cfg.clone();
    echo.output = None;
    let echo = serde_json::to_value(&echo).expect("config serializes");
    let pair_key = json!({
        "stage": "pair",
        "algebra": cfg.algebra,
        "subalgebra": echo["subalgebra"],
        "group_order": nj(cfg.caps.group_order),
    });
    let summary = stage(cache, &pair_key, || {
        payload(
            pair_summary(&pair, cfg.caps.group_order)
                .map(|v| (Status::Pass, v))
                .map_err(CliError::from),
        )
    })?;

    let result_key = json!({
        "stage": "result",
        "config": echo,
        "lambda": vj(&lambda),
    });
    let result = stage(cache, &result_key, || {
        let r = match cfg.command {
            Command::Multiplets => multiplets(cfg, &pair, &lambda).map_err(CliError::from),
            Command::Cohomology => cohomology(cfg, &pair, &lambda),
            Command::Cocycle => cocycle(cfg, &pair, &lambda).map_err(CliError::from),
            Command::SquareIdentity => square_identity(cfg, &pair, &lambda).map_err(CliError::from),
            Command::HcDiagram => hc_diagram(cfg, &pair, &lambda).map_err(CliError::from),
            Command::Nonvanishing => nonvanishing(cfg, &pair, &lambda),
            Command::DescribePair => {
                Ok((Status::from_bool(summary["status"] == "PASS"), json!({})))
            }
        };
        payload(r)
    })?;

    // The pair stage only fails by running out of group budget.
    let mut status = match result["status"].as_str() {
        Some("PASS") => Status::Pass,
        Some("FAIL") => Status::Fail,
        _ => Status::Inconclusive,
    };
    if summary["status"] != "PASS" {
        status = status.max(Status::Inconclusive);
    }
    let mut pair_j = summary["witness"].clone();
    if let Value::Object(m) = &mut pair_j {
        m.insert("algebra".into(), Value::String(cfg.algebra.clone()));
        m.insert("subalgebra".into(), echo["subalgebra"].clone());
    }
    let report = json!({
        "check": cfg.command.name(),
        "convention_version": CONVENTION_VERSION,
        "config": echo,
        "pair": pair_j,
        "lambda": vj(&lambda),
        "lambda_fundamental": vj(&pair.g.root_system().dynkin_labels(&lambda)),
        "status": status_j(status),
        "witness": result["witness"],
    });
    let report = strings_only(report);
    let (h1, m1) = cache.map_or((0, 0), |c| (c.hits(), c.misses()));
    Ok(Outcome {
        report,
        status,
        cache_hits: h1 - h0,
        cache_misses: m1 - m0,
    })
}

/// Reports carry every number as a string, so integers echoed from the
/// config are converted too.
fn strings_only(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(a) => Value::Array(a.into_iter().map(strings_only).collect()),
        Value::Object(m) => {
            Value::Object(m.into_iter().map(|(k, x)| (k, strings_only(x))).collect())
        }
        other => other,
    }
}

/// Summary of a root system for `dirac-kit describe`.
pub fn describe_type(label: &str) -> Result<Value, CliError> {
    let g = build_algebra(label)?;
    let rs = g.root_system();
    let cartan: Vec<Value> = rs
        .cartan()
        .entries()
        .iter()
        .map(|row| Value::Array(row.iter().map(nj).collect()))
        .collect();
    let positive: Vec<Value> = rs
        .positive_roots()
        .iter()
        .map(|r| Value::Array(r.iter().map(nj).collect()))
        .collect();
    Ok(json!({
        "type": label,
        "rank": nj(rs.rank()),
        "dim": nj(g.dim()),
        "num_positive_roots": nj(rs.num_positive()),
        "weyl_order": nj(rs.classical_weyl_order()),
        "cartan_matrix": cartan,
        "rho": vj(rs.rho()),
        "positive_roots": positive,
        "convention_version": CONVENTION_VERSION,
    }))
}
