//! Property suites behind `spinsqueeze verify`.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

use nalgebra::{Matrix2, Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use spinsqueeze_core::entanglement::{concurrence_pure, invariant_i, verify_identity_imp1, witness};
use spinsqueeze_core::operators::{apply_local_unitaries, complete_frame, LocalUnitary};
use spinsqueeze_core::random::{
    haar_pure_state, random_local_unitary, random_mixed_state, random_symmetric_matrix3, random_symmetric_state,
};
use spinsqueeze_core::squeezing::{
    brute_force_min_variance, quadratic_form_min, xi_standard, xi_tilde_general, xi_tilde_symmetric, UndefinedReason,
};
use spinsqueeze_core::states::{embed_symmetric, random_separable_terms, DensityMatrix, PureState};
use spinsqueeze_core::{Direction, QubitMoments, C64};

use crate::error::CliError;
use crate::statefile::{to_json, State};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Invariance,
    SeparableBound,
    Oracle,
    Identities,
}

/// Pass/fail tally for one property.
#[derive(Debug, Serialize)]
pub struct Property {
    pub name: &'static str,
    pub checked: usize,
    pub failed: usize,
    /// Largest residual, or the extreme value for bound checks.
    pub worst: f64,
    /// First failing instance, serialized for replay.
    pub failure: Option<Value>,
}

impl Property {
    fn new(name: &'static str) -> Self {
        Self { name, checked: 0, failed: 0, worst: 0.0, failure: None }
    }

    fn bound(name: &'static str) -> Self {
        Self { worst: f64::INFINITY, ..Self::new(name) }
    }

    /// Records a residual that must stay below `tol`.
    fn residual(&mut self, value: f64, tol: f64, instance: impl FnOnce() -> Value) {
        self.checked += 1;
        self.worst = self.worst.max(value);
        // NaN fails too
        if value.is_nan() || value >= tol {
            self.fail(instance);
        }
    }

    /// Records a value that must stay at or above `floor`; `worst` tracks the minimum.
    fn at_least(&mut self, value: f64, floor: f64, instance: impl FnOnce() -> Value) {
        self.checked += 1;
        self.worst = self.worst.min(value);
        if value.is_nan() || value < floor {
            self.fail(instance);
        }
    }

    fn holds(&mut self, ok: bool, instance: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok {
            self.fail(instance);
        }
    }

    fn fail(&mut self, instance: impl FnOnce() -> Value) {
        self.failed += 1;
        if self.failure.is_none() {
            self.failure = Some(instance());
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub seed: u64,
    pub properties: Vec<Property>,
    /// Reported for information only.
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(Property::passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("suite {} (seed {})\n", self.suite, self.seed);
        for p in &self.properties {
            out.push_str(&format!(
                "  {:<4} {:<44} {}/{} ok, worst {:.3e}\n",
                if p.passed() { "PASS" } else { "FAIL" },
                p.name,
                p.checked - p.failed,
                p.checked,
                p.worst
            ));
            if let Some(f) = &p.failure {
                out.push_str(&format!("       replay: {f}\n"));
            }
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out.push_str(if self.passed() { "result: pass\n" } else { "result: FAIL\n" });
        out
    }
}

fn state_value(state: State) -> Value {
    serde_json::from_str(&to_json(&state)).expect("state files are valid JSON")
}

fn density_value(rho: &DensityMatrix) -> Value {
    state_value(State::Density(rho.clone()))
}

fn tilde(state: &dyn QubitMoments) -> Result<Option<(f64, f64)>, CliError> {
    let r = xi_tilde_general(state)?;
    Ok(r.xi1_tilde.zip(r.xi2_tilde))
}

pub fn run(suite: Suite, seed: u64) -> Result<SuiteReport, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (name, properties, notes) = match suite {
        Suite::Invariance => ("invariance", invariance(&mut rng)?, vec![]),
        Suite::SeparableBound => ("separable-bound", separable_bound(&mut rng)?, vec![]),
        Suite::Oracle => {
            let (p, n) = oracle(&mut rng)?;
            ("oracle", p, n)
        }
        Suite::Identities => ("identities", identities(&mut rng)?, vec![]),
    };
    Ok(SuiteReport { suite: name, seed, properties, notes })
}

fn invariance(rng: &mut ChaCha8Rng) -> Result<Vec<Property>, CliError> {
    let mut p = Property::new("tilde parameters under local unitaries");
    let mut states = 0;
    while states < 200 {
        let n = rng.random_range(2..=4);
        let rho = if states % 2 == 0 {
            haar_pure_state(n, rng)?.to_density()?
        } else {
            random_mixed_state(n, rng.random_range(2..=4), rng)?
        };
        let Some(base) = tilde(&rho)? else { continue };
        states += 1;
        for _ in 0..20 {
            let u = random_local_unitary(n, rng);
            let moved = apply_local_unitaries(&rho, &u)?;
            let (x1, x2) = tilde(&moved)?.unwrap_or((f64::NAN, f64::NAN));
            let change = (x1 - base.0).abs().max((x2 - base.1).abs());
            p.residual(change, 1e-9, || density_value(&rho));
        }
    }

    let mut q = Property::new("xi1 changes under I x sigma_x");
    let zero = C64::new(0.0, 0.0);
    let psi = PureState::new(2, vec![zero, C64::new(FRAC_PI_8.cos(), 0.0), C64::new(FRAC_PI_8.sin(), 0.0), zero])?;
    let sx = Matrix2::new(zero, C64::new(1.0, 0.0), C64::new(1.0, 0.0), zero);
    let flipped = apply_local_unitaries(&psi, &LocalUnitary::single(2, 1, sx)?)?;
    let before = xi_standard(&psi)?;
    let after = xi_standard(&flipped)?.xi1;
    let expected = (1.0 - FRAC_PI_4.sin()).sqrt();
    q.holds(
        before.undefined_reason == Some(UndefinedReason::MeanSpinZero)
            && after.is_some_and(|x| (x - expected).abs() < 1e-9),
        || state_value(State::Pure(psi.clone())),
    );
    Ok(vec![p, q])
}

fn separable_bound(rng: &mut ChaCha8Rng) -> Result<Vec<Property>, CliError> {
    let mut bound = Property::bound("xi2_tilde >= 1 on separable states");
    let mut never = Property::new("witness never fires on separable states");
    for _ in 0..500 {
        let n = rng.random_range(2..=5);
        let terms = rng.random_range(1..=8);
        let sample_seed: u64 = rng.random();
        let terms = random_separable_terms(n, terms, sample_seed)?;
        let state = State::mixture(terms)?;
        let s = state.moments();
        let instance = || state_value(state.clone());
        if let Some(x2) = xi_tilde_general(s)?.xi2_tilde {
            bound.at_least(x2, 1.0 - 1e-9, instance);
        }
        never.holds(!witness(s)?.is_entangled(), instance);
    }
    Ok(vec![bound, never])
}

fn matrix_value(m: &Matrix3<f64>, n0: &Direction) -> Value {
    let rows: Vec<Vec<f64>> = (0..3).map(|i| (0..3).map(|j| m[(i, j)]).collect()).collect();
    let d = n0.as_vector();
    json!({ "matrix": rows, "n0": [d.x, d.y, d.z] })
}

fn oracle(rng: &mut ChaCha8Rng) -> Result<(Vec<Property>, Vec<String>), CliError> {
    let mut grid = Property::new("closed-form minimum vs 10^4-point grid");
    for _ in 0..100 {
        let m = random_symmetric_matrix3(rng);
        let n0 = Direction::normalize(Vector3::from_fn(|_, _| rng.random_range(-1.0..1.0)))?;
        let frame = complete_frame(&n0);
        let brute = (0..10_000)
            .map(|k| {
                let v = frame.perp_direction(PI * k as f64 / 10_000.0);
                v.dot(&(m * v))
            })
            .fold(f64::INFINITY, f64::min);
        let gap = (quadratic_form_min(&m, &n0).0 - brute).abs();
        grid.residual(gap, 1e-6, || matrix_value(&m, &n0));
    }

    let mut general = Property::new("general path == symmetric closed form");
    let mut upper = Property::new("independent angles <= common direction");
    let mut two_qubit = Property::new("independent angles == closed form, N = 2 pure");
    let mut worst_gap: (f64, usize) = (0.0, 0);
    for k in 0..60 {
        let n = 2 + k % 3;
        let s = random_symmetric_state(n, rng)?;
        let closed = xi_tilde_symmetric(&s)?;
        let full = embed_symmetric(&s)?;
        let g = xi_tilde_general(&full)?;
        let instance = || state_value(State::Symmetric(s.clone()));
        let gap = match (closed.xi1_tilde, g.xi1_tilde) {
            (Some(a), Some(b)) => (a - b).abs(),
            _ => f64::NAN,
        };
        general.residual(gap, 1e-9, instance);

        let var = closed.min_variance.unwrap_or(f64::NAN);
        let n0 = Direction::normalize(s.bloch_vector(0)?)?;
        let brute = brute_force_min_variance(&s, &vec![n0; n], 128)?;
        upper.holds(brute <= var + 1e-9, instance);
        if n == 2 {
            two_qubit.residual((brute - var).abs(), 1e-6, instance);
        } else if var - brute > worst_gap.0 {
            worst_gap = (var - brute, n);
        }
    }
    let notes = vec![format!(
        "for N >= 3 independent per-qubit angles reach below the common-direction minimum (largest gap {:.6} at N = {})",
        worst_gap.0, worst_gap.1
    )];
    Ok((vec![grid, general, upper, two_qubit], notes))
}

fn identities(rng: &mut ChaCha8Rng) -> Result<Vec<Property>, CliError> {
    let mut imp = Property::new("I == 2 s0^2 t+ (xi1~^2 - 1)/(N - 1)");
    let mut sign = Property::new("I < 0 <=> xi1~ < 1");
    for k in 0..200 {
        let n = 2 + k % 5;
        let s = random_symmetric_state(n, rng)?;
        let instance = || state_value(State::Symmetric(s.clone()));
        imp.residual(verify_identity_imp1(&s)?.residual, 1e-9, instance);
        let xi1 = xi_tilde_symmetric(&s)?.xi1_tilde.unwrap_or(1.0);
        if (xi1 - 1.0).abs() > 1e-6 {
            sign.holds((invariant_i(&s, None)? < 0.0) == (xi1 < 1.0), instance);
        }
    }

    let mut c1 = Property::new("xi1~ == sqrt(1 - C), two-qubit pure");
    let mut c2 = Property::new("xi2~ == 1/sqrt(1 + C), two-qubit pure");
    for _ in 0..1000 {
        let psi = haar_pure_state(2, rng)?;
        let c = concurrence_pure(&psi)?;
        let (x1, x2) = tilde(&psi)?.unwrap_or((f64::NAN, f64::NAN));
        let instance = || state_value(State::Pure(psi.clone()));
        c1.residual((x1 - (1.0 - c).sqrt()).abs(), 1e-9, instance);
        c2.residual((x2 - 1.0 / (1.0 + c).sqrt()).abs(), 1e-9, instance);
    }
    Ok(vec![imp, sign, c1, c2])
}
