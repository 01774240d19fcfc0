//! One function per task; each returns `(passed, result)` for the report.

use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{RunConfig, Task};
use super::report::{to_value, Report, Timing, TOOL, VERSION};
use crate::acceptance;
use crate::derham::{check_pi_equivariance, cyclicity_probe, image_submodule, singular_defect, verify_complex};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::binomial;
use crate::smash::{phi_poly, phi_truncation_rank, phi_witt, verify_phi_homomorphism};
use crate::weighting::{uniform_bound_check, verify_weight_representation, WeightGrid, Weighting};
use crate::whittaker::{random_element, TensorModule};
use crate::witt::{as_weyl, WittElement};

/// Box radius used for the `∩_r I_r M` decay series.
const DECAY_RADIUS: i64 = 2;

/// Runs the configured task and assembles its report.
pub fn run(config: &RunConfig) -> Result<Report> {
    let start = Instant::now();
    let mut timing = Timing::default();
    let (passed, result) = match config.task {
        Task::Bracket => bracket(config)?,
        Task::Phi => phi(config)?,
        Task::VerifyIso => verify_iso(config)?,
        Task::Whittaker => whittaker(config, &mut timing)?,
        Task::Decompose => decompose(config)?,
        Task::Omega => omega(config)?,
        Task::Complex => complex(config, &mut timing)?,
        Task::Weighting => weighting(config, &mut timing)?,
        Task::All => all(&mut timing)?,
    };
    timing.total_millis = super::report::millis(start.elapsed());
    Ok(Report {
        tool: TOOL,
        version: VERSION,
        task: config.task,
        config: config.echo(),
        passed,
        result,
        timing,
    })
}

type Outcome = Result<(bool, Value)>;

fn required<'a>(field: &str, value: &'a Option<String>) -> Result<&'a str> {
    value
        .as_deref()
        .ok_or_else(|| Error::Config(format!("task needs --{field}")))
}

fn module(config: &RunConfig) -> Result<TensorModule> {
    TensorModule::new(config.a.clone(), config.module.build(config.n)?)
}

fn bracket(config: &RunConfig) -> Outcome {
    let x = WittElement::parse(config.n, required("x", &config.x)?)?;
    let y = WittElement::parse(config.n, required("y", &config.y)?)?;
    let b = x.bracket(&y)?;
    let commutator = as_weyl(&x).commutator(&as_weyl(&y))?;
    let agrees = as_weyl(&b) == commutator;
    Ok((
        agrees,
        json!({
            "x": x.to_string(),
            "y": y.to_string(),
            "bracket": b.to_string(),
            "weyl_commutator": commutator.to_string(),
            "agrees_with_commutator": agrees,
        }),
    ))
}

fn phi(config: &RunConfig) -> Outcome {
    let mut images = Vec::new();
    if let Some(x) = &config.x {
        let x = WittElement::parse(config.n, x)?;
        images.push(json!({ "input": x.to_string(), "kind": "field", "image": phi_witt(&x).to_string() }));
    }
    if let Some(f) = &config.poly {
        let f = Poly::parse(config.n, f)?;
        images.push(json!({ "input": f.to_string(), "kind": "polynomial", "image": phi_poly(&f).to_string() }));
    }
    if images.is_empty() {
        return Err(Error::Config("task needs --x or --poly".into()));
    }
    Ok((true, json!({ "images": images })))
}

fn verify_iso(config: &RunConfig) -> Outcome {
    let report = verify_phi_homomorphism(config.n, config.degree);
    let rank = phi_truncation_rank(config.n, config.degree);
    Ok((
        report.passed && rank.full_rank,
        json!({ "homomorphism": to_value(&report)?, "truncation_rank": to_value(&rank)? }),
    ))
}

#[derive(Serialize)]
struct FreeBasis {
    size: usize,
    rank: usize,
    invertible: bool,
}

#[derive(Serialize)]
struct RoundTrips {
    trials: usize,
    seed: u64,
    passed: usize,
    failure: Option<String>,
}

fn whittaker(config: &RunConfig, timing: &mut Timing) -> Outcome {
    let m = module(config)?;
    let t = Instant::now();
    let wh = m.whittaker_vectors(config.degree)?.dim();
    timing.record("whittaker_vectors", t.elapsed());
    let mut passed = wh == m.dim();
    let (km, free, trips) = if config.a.is_nonsingular() {
        let t = Instant::now();
        let km = m.km_table(config.degree)?;
        let matrix = m.free_basis_matrix(config.degree)?;
        let rank = matrix.rank();
        let free = FreeBasis {
            size: matrix.rows(),
            rank,
            invertible: rank == matrix.rows() && rank == matrix.cols(),
        };
        timing.record("free_basis", t.elapsed());
        let t = Instant::now();
        let trips = round_trips(&m, config)?;
        timing.record("round_trips", t.elapsed());
        passed &= free.invertible && trips.passed == trips.trials;
        (Some(km), Some(free), Some(trips))
    } else {
        (None, None, None)
    };
    Ok((
        passed,
        json!({
            "dim_v": m.dim(),
            "dim_wh": wh,
            "km_table": to_value(&km)?,
            "free_basis": to_value(&free)?,
            "round_trips": to_value(&trips)?,
        }),
    ))
}

fn round_trips(m: &TensorModule, config: &RunConfig) -> Result<RoundTrips> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut passed = 0;
    let mut failure = None;
    for _ in 0..config.trials {
        let w = random_element(&mut rng, m.n(), m.dim(), config.degree, 4);
        let back = m.reassemble(&m.whittaker_decompose(&w)?)?;
        if back == w {
            passed += 1;
        } else if failure.is_none() {
            failure = Some(w.to_string());
        }
    }
    Ok(RoundTrips {
        trials: config.trials,
        seed: config.seed,
        passed,
        failure,
    })
}

fn decompose(config: &RunConfig) -> Outcome {
    let m = module(config)?;
    let f = Poly::parse(config.n, required("poly", &config.poly)?)?;
    if config.component > m.dim() {
        return Err(Error::parse(
            "component",
            format!("{} exceeds dim V = {}", config.component, m.dim()),
        ));
    }
    let v = m.whittaker_generator(config.component - 1);
    let w = m.a_act(&f, &v)?;
    if w.is_zero() {
        return Err(Error::ZeroInput("poly"));
    }
    let coeffs = m.whittaker_decompose(&w)?;
    let back = m.reassemble(&coeffs)?;
    let ok = back == w;
    Ok((
        ok,
        json!({
            "element": w.to_string(),
            "leading_index": to_value(&m.degree_of(&w)?)?,
            "coefficients": to_value(&coeffs)?,
            "round_trip": ok,
        }),
    ))
}

fn omega(config: &RunConfig) -> Outcome {
    let report = module(config)?.find_annihilating_m(config.degree, config.m_max);
    Ok((report.minimal_m.is_some() && report.monotone, to_value(&report)?))
}

#[derive(Serialize)]
struct ImageReport {
    k: usize,
    dim: usize,
    dim_wh: usize,
    expected_dim_wh: usize,
    cyclicity: Option<crate::derham::CyclicityReport>,
}

fn complex(config: &RunConfig, timing: &mut Timing) -> Outcome {
    let a = &config.a;
    let n = config.n;
    let all_zero = a.values().iter().all(num_traits::Zero::is_zero);
    let t = Instant::now();
    if all_zero {
        let report = singular_defect(n, config.degree)?;
        timing.record("complex", t.elapsed());
        let passed = report.d2_zero && report.stages[0].defect == 1;
        return Ok((passed, json!({ "mode": "singular_defect", "complex": to_value(&report)? })));
    }
    let report = verify_complex(a, config.degree)?;
    timing.record("complex", t.elapsed());
    let mut passed = report.d2_zero && report.exact;

    let t = Instant::now();
    let mut equivariance = Vec::new();
    for k in 1..=n {
        if let Some((x, w)) = check_pi_equivariance(a, k, config.degree)? {
            equivariance.push(json!({ "k": k, "field": x, "element": w }));
        }
    }
    timing.record("equivariance", t.elapsed());
    passed &= equivariance.is_empty();

    let mut images = Vec::new();
    if a.is_nonsingular() {
        let t = Instant::now();
        for k in 1..=n {
            let sub = image_submodule(a, k, config.degree)?;
            let dim_wh = sub.whittaker_subspace().dim();
            let expected: usize = binomial((n - 1) as u32, (k - 1) as u32).try_into().expect("small binomial");
            let cyclicity = if config.trials > 0 && config.degree >= 2 {
                Some(cyclicity_probe(&sub, config.trials, config.seed)?)
            } else {
                None
            };
            passed &= dim_wh == expected && cyclicity.as_ref().is_none_or(|c| c.passed);
            images.push(ImageReport {
                k,
                dim: sub.dim(),
                dim_wh,
                expected_dim_wh: expected,
                cyclicity,
            });
        }
        timing.record("images", t.elapsed());
    }
    Ok((
        passed,
        json!({
            "mode": "exactness",
            "complex": to_value(&report)?,
            "equivariance_failures": equivariance,
            "images": to_value(&images)?,
        }),
    ))
}

fn weighting(config: &RunConfig, timing: &mut Timing) -> Outcome {
    let grid = WeightGrid::parse(config.n, &config.grid)?;
    let w = Weighting::new(Arc::new(module(config)?), config.degree)?;
    // brackets of fields with |m| ≤ f reach degree 2f − 1
    let field_degree = config.degree.div_ceil(2);
    let t = Instant::now();
    let rep = verify_weight_representation(&w, &grid, field_degree)?;
    timing.record("representation", t.elapsed());
    let t = Instant::now();
    let bound = uniform_bound_check(&w, &grid, DECAY_RADIUS)?;
    timing.record("uniform_bound", t.elapsed());
    Ok((
        rep.passed && bound.uniform,
        json!({ "representation": to_value(&rep)?, "uniform_bound": to_value(&bound)? }),
    ))
}

fn all(timing: &mut Timing) -> Outcome {
    let results = acceptance::run_all();
    for r in &results {
        timing.record(format!("criterion {}", r.id), r.elapsed);
    }
    let passed = results.iter().all(|r| r.passed);
    Ok((passed, json!({ "criteria": to_value(&results)? })))
}
