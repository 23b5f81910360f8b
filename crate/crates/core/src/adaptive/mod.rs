//! Two-shot adaptive discrimination scheme.
//!
//! The maximally entangled state is fed to the unknown measurement. Outcome
//! `i` leaves the reference register in `conj(x_i)` under the first
//! hypothesis and `conj(y_i)` under the second. An isometry `U_i` sends these
//! to `e^{iθ_i}|ξ>` and `|η>` on two registers, the unknown measurement is
//! applied again to the first of them, and the remaining register ends up in
//! orthogonal states because `A = Tr_Z |ξ~><η~|` is orthogonal to every
//! `|x_j><y_j|`.

mod helstrom;
mod io;
mod simulate;

use nalgebra::ComplexField;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

pub use helstrom::helstrom_lower_bound;
pub use io::{FinalMeasurementFile, SchemeFile, VEC_CONVENTION};
pub use simulate::{
    simulate_exact, simulate_exact_with_prior, simulate_sampled, Hypothesis, PathRecord, SimulationMode,
    SimulationReport,
};

use crate::classify::{build_span, disjoint, identity_in_span, OperatorSubspace};
use crate::error::{Error, Result};
use crate::matcore::{
    c, cis, complete_isometry, cre, dyad, hs_inner, isometry_defect, orthogonalize, partial_trace_second, svd,
    trace, vectorize, CMatrix, Ket,
};
use crate::povm::PovmPair;
use crate::rng;
use crate::scalar::Scalar;
use crate::tol::Tolerances;

/// How to pick `A` from the orthogonal complement of the span.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum AChoice {
    /// First element of the canonical complement basis.
    #[default]
    Canonical,
    /// An element whose overlap `|Tr A| / ‖A‖_1` equals the common residual
    /// overlap of the pair, found by bisection between a traceless element
    /// and the best of `candidates` random ones.
    MatchOverlap { seed: u64, candidates: usize },
}

/// Projective measurement `{|first><first|, |second><second|, rest}` on the
/// kept register.
#[derive(Debug, Clone, PartialEq)]
pub struct FinalMeasurement<T: Scalar> {
    pub first: Ket<T>,
    pub second: Ket<T>,
    /// Set when a conditional state vanished and a fixed measurement was used.
    pub dummy: bool,
}

impl<T: Scalar> FinalMeasurement<T> {
    /// Builds the measurement for conditional states `v1`, `v2`.
    pub fn for_states(v1: &Ket<T>, v2: &Ket<T>, zero_norm: f64) -> Self {
        let d = v1.len();
        let zero = T::lit(zero_norm);
        let dummy = v1.norm() <= zero || v2.norm() <= zero;
        let mut candidates: Vec<Ket<T>> = [v1, v2].into_iter().filter(|v| v.norm() > zero).cloned().collect();
        candidates.extend((0..d).map(|k| {
            let mut e = Ket::zeros(d);
            e[k] = cre(T::one());
            e
        }));
        let mut chosen: Vec<Ket<T>> = Vec::with_capacity(2);
        for v in candidates {
            if chosen.len() == 2 {
                break;
            }
            let scale = v.norm();
            let r = orthogonalize(&v, &chosen);
            let n = r.norm();
            if n > T::lit(1e-3) * scale {
                chosen.push(r / cre(n));
            }
        }
        let second = chosen.pop().expect("d >= 2");
        let first = chosen.pop().expect("d >= 2");
        Self { first, second, dummy }
    }

    /// Probabilities of the three outcomes for the unnormalized state `w`.
    pub fn outcome_weights(&self, w: &Ket<T>) -> [T; 3] {
        let p1 = self.first.dotc(w).norm_sqr();
        let p2 = self.second.dotc(w).norm_sqr();
        let rest = (w.norm_squared() - p1 - p2).max(T::zero());
        [p1, p2, rest]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveScheme<T: Scalar> {
    pub d: usize,
    pub m: usize,
    /// `|1>> / √d` on `C^d ⊗ C^d`.
    pub input_state: Ket<T>,
    /// Unit-Frobenius operator orthogonal to every `|x_i><y_i|`.
    pub a: CMatrix<T>,
    pub xi: Ket<T>,
    pub eta: Ket<T>,
    pub phases: Vec<T>,
    /// `U_i`, each `d^2 x d`.
    pub isometries: Vec<CMatrix<T>>,
    /// Indexed by `i * m + j`.
    pub final_measurements: Vec<FinalMeasurement<T>>,
}

/// Largest violations of the scheme invariants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeDefects {
    /// `max_i ‖U_i† U_i − 1‖_max`.
    pub isometry: f64,
    /// `‖Tr_Z |ξ~><η~| − A‖_max`.
    pub partial_trace: f64,
    /// `max_i |<|x_i><y_i|, A>|`.
    pub orthogonality: f64,
    /// `max(|‖ξ‖ − 1|, |‖η‖ − 1|)`.
    pub normalization: f64,
}

impl<T: Scalar> AdaptiveScheme<T> {
    pub fn final_measurement(&self, i: usize, j: usize) -> &FinalMeasurement<T> {
        &self.final_measurements[i * self.m + j]
    }

    /// `r = |<ξ|η>|`.
    pub fn overlap(&self) -> T {
        self.xi.dotc(&self.eta).norm_sqr().sqrt()
    }

    /// Unnormalized `|ξ~> = |U√Σ>>`, `|η~> = |V√Σ>>`; both have squared norm `‖A‖_1`.
    pub fn tilde_vectors(&self) -> Result<(Ket<T>, Ket<T>)> {
        let s = svd(&self.a)?;
        let scale = cre(s.singular_values.iter().fold(T::zero(), |acc, &x| acc + x).sqrt());
        Ok((&self.xi * scale, &self.eta * scale))
    }

    pub fn defects(&self, pair: &PovmPair<T>) -> Result<SchemeDefects> {
        let isometry = self
            .isometries
            .iter()
            .map(|u| isometry_defect(u).to_f64_lossy())
            .fold(0.0, f64::max);
        let (xt, et) = self.tilde_vectors()?;
        let pt = partial_trace_second(&dyad(&xt, &et), self.d, self.d)?;
        let partial_trace = crate::matcore::max_abs(&(pt - &self.a)).to_f64_lossy();
        let orthogonality = pair
            .first
            .vectors()
            .iter()
            .zip(pair.second.vectors())
            .map(|(x, y)| hs_inner(&dyad(x, y), &self.a).norm_sqr().sqrt().to_f64_lossy())
            .fold(0.0, f64::max);
        let normalization = (self.xi.norm() - T::one())
            .abs()
            .max((self.eta.norm() - T::one()).abs())
            .to_f64_lossy();
        Ok(SchemeDefects {
            isometry,
            partial_trace,
            orthogonality,
            normalization,
        })
    }
}

/// `(<x| ⊗ 1) v` for `v` on `C^d ⊗ C^d`.
pub fn contract_first<T: Scalar>(v: &Ket<T>, x: &Ket<T>) -> Ket<T> {
    let d = x.len();
    Ket::from_fn(d, |b, _| (0..d).fold(c(0.0, 0.0), |acc, a| acc + x[a].conj() * v[a * d + b]))
}

/// Unnormalized reference-register state after outcome `x` on the maximally
/// entangled input: `conj(x)/√d`.
pub fn residual_state<T: Scalar>(x: &Ket<T>) -> Ket<T> {
    let d = T::from_usize(x.len()).unwrap();
    x.map(|z| z.conj()) / cre(d.sqrt())
}

/// `|<ψ_i|φ_i>|` for the normalized residual states of every outcome.
pub fn residual_overlaps<T: Scalar>(pair: &PovmPair<T>) -> Vec<f64> {
    pair.first
        .vectors()
        .iter()
        .zip(pair.second.vectors())
        .map(|(x, y)| {
            let z = residual_state(x).dotc(&residual_state(y));
            let n = residual_state(x).norm() * residual_state(y).norm();
            (z.norm_sqr().sqrt() / n).to_f64_lossy()
        })
        .collect()
}

/// `|Tr A| / ‖A‖_1`, the overlap `|<ξ|η>|` a scheme built on `A` has.
pub fn operator_overlap<T: Scalar>(a: &CMatrix<T>) -> Result<T> {
    let s = svd(a)?;
    let nuc = s.singular_values.iter().fold(T::zero(), |acc, &x| acc + x);
    if nuc <= T::zero() {
        return Ok(T::zero());
    }
    Ok(trace(a).norm_sqr().sqrt() / nuc)
}

fn check_preconditions<T: Scalar>(pair: &PovmPair<T>, tol: &Tolerances) -> Result<OperatorSubspace<T>> {
    pair.validate(tol)?;
    let span = build_span(pair, tol)?;
    let (inside, residual) = identity_in_span(&span, tol);
    if inside {
        return Err(Error::PreconditionFailed(format!(
            "identity lies in the span of |x_i><y_i| (residual {residual:.3e})"
        )));
    }
    if !disjoint(pair, tol) {
        return Err(Error::PreconditionFailed("the two measurements are not disjoint".into()));
    }
    Ok(span)
}

pub fn synthesize<T: Scalar>(pair: &PovmPair<T>, choice: AChoice, tol: &Tolerances) -> Result<AdaptiveScheme<T>> {
    let span = check_preconditions(pair, tol)?;
    let comp = span.complement();
    if comp.rank() == 0 {
        return Err(Error::PreconditionFailed("span of |x_i><y_i| has no orthogonal complement".into()));
    }
    let a = match choice {
        AChoice::Canonical => comp.basis_matrix(0),
        AChoice::MatchOverlap { seed, candidates } => {
            let rs = residual_overlaps(pair);
            let target = rs.iter().sum::<f64>() / rs.len() as f64;
            match_overlap(&comp, target, seed, candidates, tol)?
        }
    };
    synthesize_with_operator(pair, a, tol)
}

/// Builds the scheme around a given `A`, which must be orthogonal to the span.
pub fn synthesize_with_operator<T: Scalar>(
    pair: &PovmPair<T>,
    a: CMatrix<T>,
    tol: &Tolerances,
) -> Result<AdaptiveScheme<T>> {
    pair.validate(tol)?;
    let d = pair.dim();
    let m = pair.effects();
    if a.shape() != (d, d) {
        return Err(Error::DimensionMismatch(format!(
            "A is {}x{}, expected {d}x{d}",
            a.nrows(),
            a.ncols()
        )));
    }
    let norm = a.norm();
    if !(norm > T::lit(tol.zero_norm)) {
        return Err(Error::InvalidShape("A must be non-zero".into()));
    }
    let a = a / cre(norm);
    for (x, y) in pair.first.vectors().iter().zip(pair.second.vectors()) {
        let ip = hs_inner(&dyad(x, y), &a).norm_sqr().sqrt().to_f64_lossy();
        if ip > tol.span_residual {
            return Err(Error::PreconditionFailed(format!(
                "A is not orthogonal to the span (inner product {ip:.3e})"
            )));
        }
    }

    let s = svd(&a)?;
    let root = CMatrix::from_diagonal(&Ket::from_iterator(
        s.singular_values.len(),
        s.singular_values.iter().map(|&x| cre(x.sqrt())),
    ));
    let xi_t = vectorize(&(&s.u * &root))?;
    let eta_t = vectorize(&(&s.v * &root))?;
    let xi = &xi_t / cre(xi_t.norm());
    let eta = &eta_t / cre(eta_t.norm());
    let beta = xi.dotc(&eta).argument();

    let mut phases = Vec::with_capacity(m);
    let mut isometries = Vec::with_capacity(m);
    for (x, y) in pair.first.vectors().iter().zip(pair.second.vectors()) {
        let psi = residual_state(x);
        let psi = &psi / cre(psi.norm());
        let phi = residual_state(y);
        let phi = &phi / cre(phi.norm());
        let alpha = psi.dotc(&phi).argument();
        let theta = wrap_angle(beta - alpha);
        let u = complete_isometry(&[(psi, &xi * cis(theta)), (phi, eta.clone())], tol.gram_tol)?;
        let defect = isometry_defect(&u).to_f64_lossy();
        if defect > tol.atol {
            return Err(Error::PreconditionFailed(format!(
                "isometry invariant U†U = 1 violated by {defect:.3e}"
            )));
        }
        phases.push(theta);
        isometries.push(u);
    }

    let mut final_measurements = Vec::with_capacity(m * m);
    for _ in 0..m {
        for (x, y) in pair.first.vectors().iter().zip(pair.second.vectors()) {
            let v1 = contract_first(&xi, x);
            let v2 = contract_first(&eta, y);
            final_measurements.push(FinalMeasurement::for_states(&v1, &v2, tol.zero_norm));
        }
    }

    let sd = T::from_usize(d).unwrap().sqrt();
    let input_state = vectorize(&CMatrix::identity(d, d))? / cre(sd);
    Ok(AdaptiveScheme {
        d,
        m,
        input_state,
        a,
        xi,
        eta,
        phases,
        isometries,
        final_measurements,
    })
}

fn wrap_angle<T: Scalar>(t: T) -> T {
    let two_pi = T::two_pi();
    let mut t = t % two_pi;
    if t > T::pi() {
        t -= two_pi;
    } else if t <= -T::pi() {
        t += two_pi;
    }
    t
}

fn match_overlap<T: Scalar>(
    comp: &OperatorSubspace<T>,
    target: f64,
    seed: u64,
    candidates: usize,
    tol: &Tolerances,
) -> Result<CMatrix<T>> {
    let basis = comp.basis();
    let canonical = basis[0].clone();
    let r0 = operator_overlap(&canonical)?.to_f64_lossy();
    if (r0 - target).abs() <= 0.1 * tol.gram_tol {
        return Ok(canonical);
    }
    let miss = |deviation: f64| Error::GramMismatch {
        deviation,
        tol: tol.gram_tol,
    };
    if basis.len() == 1 {
        return Err(miss((r0 - target).abs()));
    }

    let d = comp.dim();
    let p = comp.project(&CMatrix::identity(d, d));
    let pn = p.norm();
    if pn <= T::lit(tol.zero_norm) {
        // Complement is traceless throughout.
        return if target <= 0.1 * tol.gram_tol {
            Ok(canonical)
        } else {
            Err(miss(target))
        };
    }
    let p_hat = &p / cre(pn);

    let traceless = basis
        .iter()
        .map(|b| b - &p_hat * hs_inner(&p_hat, b))
        .max_by(|u, v| u.norm().partial_cmp(&v.norm()).unwrap_or(std::cmp::Ordering::Equal))
        .expect("non-empty basis");
    let a0 = &traceless / cre(traceless.norm());
    if target <= 0.1 * tol.gram_tol {
        return Ok(a0);
    }

    let mut best = (operator_overlap(&p_hat)?, p_hat.clone());
    let mut r = rng::stream(seed, 0);
    for _ in 0..candidates {
        let mut cand = CMatrix::<T>::zeros(d, d);
        for b in &basis {
            let re: f64 = StandardNormal.sample(&mut r);
            let im: f64 = StandardNormal.sample(&mut r);
            cand += b * c::<T>(re, im);
        }
        let ov = operator_overlap(&cand)?;
        if ov > best.0 {
            best = (ov, cand);
        }
    }
    let (r1, a1) = best;
    if r1.to_f64_lossy() < target {
        return Err(miss(target - r1.to_f64_lossy()));
    }
    let a1 = &a1 / cre(a1.norm());

    let at = |t: T| &a0 * cre(T::one() - t) + &a1 * cre(t);
    let (mut lo, mut hi) = (T::zero(), T::one());
    for _ in 0..200 {
        let mid = (lo + hi) * T::lit(0.5);
        if operator_overlap(&at(mid))?.to_f64_lossy() < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= T::default_epsilon() {
            break;
        }
    }
    let a = at(hi);
    Ok(&a / cre(a.norm()))
}
