//! Derivative cocycle products, Lyapunov spectra via QR
//! re-orthonormalization, exterior-power growth exponents and Oseledec
//! splittings.

use nalgebra::DMatrix;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{compound, operator_norm};
use crate::torus::{Direction, TorusPoint, TorusSystem};

/// Default number of discarded iterates before exponent accumulation.
pub const DEFAULT_TRANSIENT: usize = 1_000;

/// Floor of the exponent clustering gap threshold, in nats per iterate.
pub const CLUSTER_GAP_FLOOR: f64 = 1e-2;

/// Horizon used by the finite-time sup search inside `uniform_exponent`.
pub const SUP_SEARCH_HORIZON: usize = 60;

/// Chain-rule cocycle product Φ(n, x) = D_x f^n; backward Jacobians are
/// used for n < 0. No renormalization is applied, so large |n| overflows.
pub fn cocycle_product(sys: &TorusSystem, x: &TorusPoint, n: i64) -> Result<DMatrix<f64>> {
    if n.unsigned_abs() > 10_000_000 {
        return Err(Error::InvalidInput(format!("cocycle step count {n} exceeds 1e7")));
    }
    let dim = sys.dim();
    let mut m = DMatrix::identity(dim, dim);
    let mut y = x.clone();
    let (steps, dir) = if n >= 0 {
        (n as usize, Direction::Forward)
    } else {
        ((-n) as usize, Direction::Backward)
    };
    for step in 0..steps {
        let j = sys.jacobian(&y, dir)?;
        m = j * m;
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::OrbitOverflow {
                step,
                context: "cocycle product overflowed".into(),
            });
        }
        y = match dir {
            Direction::Forward => sys.eval_map(&y)?,
            Direction::Backward => sys.eval_inverse(&y)?,
        };
    }
    Ok(m)
}

/// Lyapunov spectrum estimate with convergence diagnostics.
///
/// `history` holds running means of the exponents (sorted descending per
/// row) at checkpoint steps; `halfwidths` is the half-width of each running
/// mean over the final decade of the run, the convergence diagnostic used
/// for cluster thresholds.
#[derive(Debug, Clone)]
pub struct LyapunovSpectrum {
    pub exponents: Vec<f64>,
    pub n_steps: usize,
    pub n_transient: usize,
    pub history: Vec<(usize, Vec<f64>)>,
    pub halfwidths: Vec<f64>,
    pub sum: f64,
    pub sigma_plus: f64,
    /// (1/n)·Σ_t log|det Df(x_t)| accumulated along the orbit.
    pub det_rate: f64,
}

impl LyapunovSpectrum {
    /// Running-mean rows belonging to the final decade of the run.
    pub fn tail(&self) -> Vec<&(usize, Vec<f64>)> {
        let cutoff = self.n_steps / 10;
        self.history.iter().filter(|(t, _)| *t >= cutoff).collect()
    }

    pub fn max_halfwidth(&self) -> f64 {
        self.halfwidths.iter().fold(0.0_f64, |a, &b| a.max(b))
    }
}

/// QR-reorthonormalized Lyapunov spectrum along the forward orbit of `x0`.
pub fn qr_spectrum(
    sys: &TorusSystem,
    x0: &TorusPoint,
    n_steps: usize,
    n_transient: usize,
) -> Result<LyapunovSpectrum> {
    qr_spectrum_directed(sys, x0, n_steps, n_transient, Direction::Forward)
}

/// QR spectrum in either direction; `Backward` measures the inverse map,
/// whose spectrum is the negated reverse of the forward one.
pub fn qr_spectrum_directed(
    sys: &TorusSystem,
    x0: &TorusPoint,
    n_steps: usize,
    n_transient: usize,
    direction: Direction,
) -> Result<LyapunovSpectrum> {
    if n_steps < 1_000 {
        return Err(Error::InvalidInput(format!(
            "qr_spectrum requires n_steps >= 1000, got {n_steps}"
        )));
    }
    let dim = sys.dim();
    let advance = |p: &TorusPoint| -> Result<TorusPoint> {
        match direction {
            Direction::Forward => sys.eval_map(p),
            Direction::Backward => sys.eval_inverse(p),
        }
    };
    let mut x = x0.clone();
    for _ in 0..n_transient {
        x = advance(&x)?;
    }

    let mut q = DMatrix::<f64>::identity(dim, dim);
    let mut sums = vec![0.0f64; dim];
    let mut det_sum = 0.0f64;
    let checkpoint_every = (n_steps / 1_000).max(1);
    let mut history: Vec<(usize, Vec<f64>)> = Vec::with_capacity(n_steps / checkpoint_every + 1);

    for step in 0..n_steps {
        let j = sys.jacobian(&x, direction)?;
        det_sum += j.determinant().abs().ln();
        let b = &j * &q;
        let qr = b.qr();
        let mut r_diag: Vec<f64> = (0..dim).map(|i| qr.r()[(i, i)]).collect();
        q = qr.q();
        // fix signs so the diagonal of R is positive
        for (i, r) in r_diag.iter_mut().enumerate() {
            if *r < 0.0 {
                *r = -*r;
                for row in 0..dim {
                    q[(row, i)] = -q[(row, i)];
                }
            }
            if *r <= 0.0 || !r.is_finite() {
                return Err(Error::QrDegenerate { step, value: *r });
            }
            sums[i] += r.ln();
        }
        x = advance(&x)?;

        let t = step + 1;
        if t % checkpoint_every == 0 || t == n_steps {
            let mut means: Vec<f64> = sums.iter().map(|s| s / t as f64).collect();
            means.sort_by(|a, b| b.partial_cmp(a).unwrap());
            history.push((t, means));
        }
    }

    let mut exponents: Vec<f64> = sums.iter().map(|s| s / n_steps as f64).collect();
    exponents.sort_by(|a, b| b.partial_cmp(a).unwrap());

    let cutoff = n_steps / 10;
    let mut halfwidths = vec![0.0f64; dim];
    for i in 0..dim {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (t, row) in history.iter().filter(|(t, _)| *t >= cutoff) {
            let _ = t;
            lo = lo.min(row[i]);
            hi = hi.max(row[i]);
        }
        halfwidths[i] = if lo.is_finite() { (hi - lo) / 2.0 } else { 0.0 };
    }

    let sum: f64 = exponents.iter().sum();
    let sigma_plus: f64 = exponents.iter().filter(|&&v| v > 0.0).sum();
    Ok(LyapunovSpectrum {
        exponents,
        n_steps,
        n_transient,
        history,
        halfwidths,
        sum,
        sigma_plus,
        det_rate: det_sum / n_steps as f64,
    })
}

/// Renormalized growth rate (1/n)·log‖compound(Φ(n, x), k)‖ along an orbit.
fn growth_rate(
    sys: &TorusSystem,
    k: usize,
    x0: &TorusPoint,
    n_steps: usize,
    n_transient: usize,
) -> Result<f64> {
    if k > sys.dim() {
        return Err(Error::DegreeOutOfRange { degree: k, dim: sys.dim() });
    }
    if n_steps == 0 {
        return Err(Error::InvalidInput("growth rate needs at least one step".into()));
    }
    let mut x = x0.clone();
    for _ in 0..n_transient {
        x = sys.eval_map(&x)?;
    }
    let d = crate::linalg::binomial(sys.dim(), k);
    let mut m = DMatrix::<f64>::identity(d, d);
    let mut acc = 0.0f64;
    for step in 0..n_steps {
        let j = sys.jacobian(&x, Direction::Forward)?;
        let jk = compound(&j, k)?;
        m = jk * m;
        let scale = m.norm();
        if !scale.is_finite() || scale <= 0.0 {
            return Err(Error::OrbitOverflow {
                step,
                context: format!("exterior power degree {k} renormalization failed"),
            });
        }
        m /= scale;
        acc += scale.ln();
        x = sys.eval_map(&x)?;
    }
    // telescoped Frobenius rescalings plus a final operator-norm correction
    Ok((acc + operator_norm(&m)?.ln()) / n_steps as f64)
}

/// Top exponent of the degree-k exterior cocycle along one orbit;
/// estimates the sum of the k largest Lyapunov exponents.
pub fn exterior_top_exponent(
    sys: &TorusSystem,
    k: usize,
    x0: &TorusPoint,
    n_steps: usize,
    n_transient: usize,
) -> Result<f64> {
    growth_rate(sys, k, x0, n_steps, n_transient)
}

/// Estimate of the uniform exponent λ⁺ of the degree-k exterior cocycle.
///
/// Two routes are combined. The ergodic route runs an ensemble of
/// volume-random orbits to full length and takes the max; it converges to
/// the exponent of the invariant volume but can sit strictly below the
/// uniform exponent when the volume is not the maximizing measure. The
/// horizon route searches initial points for the largest finite-time
/// growth (1/n_h)·log‖compound(Φ(n_h, x), k)‖; by subadditivity the true
/// sup of that quantity is an upper bound for λ⁺ at every horizon, so the
/// searched max is the safer one-sided estimate on perturbed systems. For
/// linear systems the cocycle does not depend on x and the single orbit
/// value is exact, so the search is skipped.
#[derive(Debug, Clone)]
pub struct UniformExponentEstimate {
    pub estimate: f64,
    pub ergodic_max: f64,
    pub orbit_values: Vec<f64>,
    pub orbit_spread: f64,
    pub horizon_sup: Option<f64>,
    pub horizon: usize,
    pub uncertainty: f64,
}

pub fn uniform_exponent(
    sys: &TorusSystem,
    k: usize,
    ensemble_size: usize,
    n_steps: usize,
    seed: u64,
) -> Result<UniformExponentEstimate> {
    if ensemble_size == 0 {
        return Err(Error::InvalidInput("ensemble_size must be at least 1".into()));
    }
    if k > sys.dim() {
        return Err(Error::DegreeOutOfRange { degree: k, dim: sys.dim() });
    }
    let transient = DEFAULT_TRANSIENT.min(n_steps / 10);
    let ensemble = if sys.is_linear() { 1 } else { ensemble_size };

    let orbit_values: Vec<f64> = (0..ensemble)
        .into_par_iter()
        .map(|orbit| -> Result<f64> {
            let mut rng = orbit_rng(seed, 0xA1, orbit as u64);
            let x0 = random_point(&mut rng, sys.dim());
            growth_rate(sys, k, &x0, n_steps, transient)
        })
        .collect::<Result<Vec<_>>>()?;

    let ergodic_max = orbit_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ergodic_min = orbit_values.iter().copied().fold(f64::INFINITY, f64::min);
    let orbit_spread = ergodic_max - ergodic_min;

    let (horizon_sup, horizon) = if sys.is_linear() {
        (None, n_steps)
    } else {
        let n_h = SUP_SEARCH_HORIZON.min(n_steps).max(1);
        (Some(horizon_sup_search(sys, k, n_h, ensemble_size, seed)?), n_h)
    };

    let estimate = match horizon_sup {
        Some(h) => ergodic_max.max(h),
        None => ergodic_max,
    };
    Ok(UniformExponentEstimate {
        estimate,
        ergodic_max,
        orbit_values,
        orbit_spread,
        horizon_sup,
        horizon,
        uncertainty: orbit_spread / 2.0,
    })
}

fn orbit_rng(seed: u64, purpose: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (purpose << 56));
    rng.set_stream(index);
    rng
}

fn random_point(rng: &mut impl Rng, dim: usize) -> TorusPoint {
    TorusPoint::new((0..dim).map(|_| rng.gen_range(0.0..1.0)).collect())
}

/// Seeded search for the largest finite-horizon growth rate over initial
/// points: a broad random scan followed by axis-wise refinement of the
/// best candidates.
fn horizon_sup_search(
    sys: &TorusSystem,
    k: usize,
    n_h: usize,
    ensemble_size: usize,
    seed: u64,
) -> Result<f64> {
    let dim = sys.dim();
    let n_starts = (256 * ensemble_size).max(512);
    let starts: Vec<TorusPoint> = {
        let mut rng = orbit_rng(seed, 0xB2, 0);
        (0..n_starts).map(|_| random_point(&mut rng, dim)).collect()
    };
    let mut scored: Vec<(f64, usize)> = starts
        .par_iter()
        .enumerate()
        .map(|(i, x)| Ok((growth_rate(sys, k, x, n_h, 0)?, i)))
        .collect::<Result<Vec<_>>>()?;
    scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());

    let climbers: Vec<(f64, usize)> = scored.iter().take(8).copied().collect();
    let best = climbers
        .into_par_iter()
        .map(|(v0, i)| -> Result<f64> {
            let mut x = starts[i].coords().clone();
            let mut v = v0;
            for &scale in &[3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5] {
                let mut improved = true;
                let mut rounds = 0;
                while improved && rounds < 40 {
                    improved = false;
                    rounds += 1;
                    for d in 0..dim {
                        for sgn in [1.0, -1.0] {
                            let mut trial = x.clone();
                            trial[d] += sgn * scale;
                            let p = TorusPoint::from_vector(trial.clone());
                            let vt = growth_rate(sys, k, &p, n_h, 0)?;
                            if vt > v {
                                v = vt;
                                x = p.coords().clone();
                                improved = true;
                            }
                        }
                    }
                }
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(best)
}

/// Oseledec frame at a point: basis vectors grouped into blocks of equal
/// exponent, with per-block exponents and dimensions.
#[derive(Debug, Clone)]
pub struct OseledecFrame {
    pub point: TorusPoint,
    /// Columns are the basis vectors, grouped block by block.
    pub basis: DMatrix<f64>,
    pub block_dims: Vec<usize>,
    pub block_exponents: Vec<f64>,
    pub gap_threshold: f64,
}

impl OseledecFrame {
    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn n_blocks(&self) -> usize {
        self.block_dims.len()
    }

    /// Column range of block `i` inside the basis matrix.
    pub fn block_range(&self, i: usize) -> std::ops::Range<usize> {
        let start: usize = self.block_dims[..i].iter().sum();
        start..start + self.block_dims[i]
    }

    pub fn block_columns(&self, i: usize) -> DMatrix<f64> {
        let r = self.block_range(i);
        self.basis.columns(r.start, r.len()).into_owned()
    }
}

/// Groups sorted-descending exponents into blocks separated by more than
/// the gap threshold.
pub fn cluster_exponents(exponents: &[f64], threshold: f64) -> (Vec<usize>, Vec<f64>) {
    let mut dims = Vec::new();
    let mut means = Vec::new();
    let mut start = 0;
    for i in 1..=exponents.len() {
        if i == exponents.len() || exponents[i - 1] - exponents[i] > threshold {
            let block = &exponents[start..i];
            dims.push(block.len());
            means.push(block.iter().sum::<f64>() / block.len() as f64);
            start = i;
        }
    }
    (dims, means)
}

/// Estimates the Oseledec splitting at `x`.
///
/// Expanding filtration: push a frame forward along the stored backward
/// orbit from f^{−n_probe}(x) to x with QR re-orthonormalization.
/// Contracting filtration: pull a frame back from f^{+n_probe}(x) with
/// backward Jacobians. Block i is the intersection of the leading forward
/// subspace of dimension u_1+…+u_i with the trailing backward subspace of
/// dimension u_i+…+u_m.
pub fn oseledec_frame(
    sys: &TorusSystem,
    x: &TorusPoint,
    n_probe: usize,
    spectrum: &LyapunovSpectrum,
) -> Result<OseledecFrame> {
    let dim = sys.dim();
    let threshold = CLUSTER_GAP_FLOOR.max(10.0 * spectrum.max_halfwidth());
    let (block_dims, block_exponents) = cluster_exponents(&spectrum.exponents, threshold);
    let m = block_dims.len();

    if m == 1 {
        // single block: any orthonormal basis spans it
        return Ok(OseledecFrame {
            point: x.clone(),
            basis: DMatrix::identity(dim, dim),
            block_dims,
            block_exponents,
            gap_threshold: threshold,
        });
    }

    // orbit segments through x, stored to keep transported frames on-orbit
    let mut backward_orbit = Vec::with_capacity(n_probe + 1);
    backward_orbit.push(x.clone());
    for j in 0..n_probe {
        let prev = sys.eval_inverse(&backward_orbit[j])?;
        backward_orbit.push(prev);
    }
    let mut forward_orbit = Vec::with_capacity(n_probe + 1);
    forward_orbit.push(x.clone());
    for j in 0..n_probe {
        let next = sys.eval_map(&forward_orbit[j])?;
        forward_orbit.push(next);
    }

    // Transports start from a generic seeded frame: an axis-aligned start
    // can sit inside an invariant subspace (block-diagonal systems) and
    // then never rotates into the complementary directions.
    // expanding side: transport from f^{-n_probe}(x) to x
    let mut qf = generic_frame(dim, 0xF0);
    for j in (1..=n_probe).rev() {
        let jac = sys.jacobian(&backward_orbit[j], Direction::Forward)?;
        qf = orthonormalize(jac * qf)?;
    }
    // contracting side: transport from f^{+n_probe}(x) back to x
    let mut qb = generic_frame(dim, 0xB0);
    for j in (1..=n_probe).rev() {
        let jac = sys.jacobian(&forward_orbit[j], Direction::Backward)?;
        qb = orthonormalize(jac * qb)?;
    }

    let mut basis = DMatrix::<f64>::zeros(dim, dim);
    let mut col = 0;
    for i in 0..m {
        let u_i = block_dims[i];
        let p_prev: usize = block_dims[..i].iter().sum();
        let p_i = p_prev + u_i;
        let block = if i == 0 {
            qf.columns(0, u_i).into_owned()
        } else if i == m - 1 {
            qb.columns(0, u_i).into_owned()
        } else {
            let fwd = qf.columns(0, p_i).into_owned();
            let bwd = qb.columns(0, dim - p_prev).into_owned();
            intersect_subspaces(&fwd, &bwd, u_i, &block_exponents, threshold)?
        };
        for c in 0..u_i {
            let v = block.column(c);
            let norm = v.norm();
            for r in 0..dim {
                basis[(r, col)] = v[r] / norm;
            }
            col += 1;
        }
    }

    // reject ill-conditioned splittings
    let svd = basis
        .clone()
        .try_svd(false, false, f64::EPSILON, 200)
        .ok_or_else(|| Error::Numeric("SVD failed on Oseledec basis".into()))?;
    let smin = svd.singular_values.min();
    let smax = svd.singular_values.max();
    if smin <= 0.0 || smax / smin >= 1e8 {
        return Err(Error::DegenerateSplitting { exponents: block_exponents, threshold });
    }

    Ok(OseledecFrame {
        point: x.clone(),
        basis,
        block_dims,
        block_exponents,
        gap_threshold: threshold,
    })
}

fn generic_frame(dim: usize, salt: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x05EE_D0 ^ salt);
    let m = DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0))
        + DMatrix::identity(dim, dim) * 2.0;
    orthonormalize(m).expect("generic frame is full rank")
}

fn orthonormalize(m: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let dim = m.nrows();
    let qr = m.qr();
    let mut q = qr.q();
    for i in 0..dim {
        let r = qr.r()[(i, i)];
        if r == 0.0 || !r.is_finite() {
            return Err(Error::QrDegenerate { step: 0, value: r });
        }
        if r < 0.0 {
            for row in 0..dim {
                q[(row, i)] = -q[(row, i)];
            }
        }
    }
    Ok(q)
}

/// Intersection of two subspaces given by orthonormal columns, extracted
/// from the singular directions of UᵀW with singular value near 1.
fn intersect_subspaces(
    u: &DMatrix<f64>,
    w: &DMatrix<f64>,
    want: usize,
    exponents: &[f64],
    threshold: f64,
) -> Result<DMatrix<f64>> {
    let m = u.transpose() * w;
    let svd = m
        .svd(true, false);
    let u_small = svd
        .u
        .ok_or_else(|| Error::Numeric("SVD returned no left vectors".into()))?;
    let sv = svd.singular_values;
    if (0..want).any(|i| sv[i] < 0.99) {
        return Err(Error::DegenerateSplitting {
            exponents: exponents.to_vec(),
            threshold,
        });
    }
    let mut out = DMatrix::<f64>::zeros(u.nrows(), want);
    for j in 0..want {
        let dir = u * u_small.column(j);
        out.set_column(j, &dir);
    }
    Ok(out)
}

/// Principal angle between two subspaces of equal dimension, given as
/// matrices whose columns span them (need not be orthonormal).
pub fn principal_angle(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<f64> {
    let qa = thin_q(a)?;
    let qb = thin_q(b)?;
    let m = qa.transpose() * qb;
    let sv = m
        .try_svd(false, false, f64::EPSILON, 200)
        .ok_or_else(|| Error::Numeric("SVD failed in principal_angle".into()))?
        .singular_values;
    let c = sv.min().clamp(-1.0, 1.0);
    Ok(c.acos())
}

fn thin_q(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let qr = a.clone().qr();
    let q = qr.q();
    Ok(q.columns(0, a.ncols().min(q.ncols())).into_owned())
}
