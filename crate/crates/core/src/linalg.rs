//! Exterior-power (compound) matrix algebra, Gram matrices, operator norms
//! and spectral radii.
//!
//! A compound matrix of degree `k` acts on k-vectors; its entries are the
//! k×k minors of the base matrix, indexed by increasing multi-indices in
//! lexicographic order. That ordering is fixed here and shared by every
//! module that works over the `dx_I` basis.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

/// Binomial coefficient C(n, k) as usize; panics on overflow (n ≤ 64 here).
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (n - i) as u128;
        den *= (i + 1) as u128;
    }
    (num / den) as usize
}

/// All increasing k-tuples from {0, …, n−1}, in lexicographic order.
///
/// This is the index set for compound matrices, exterior-power Gram
/// matrices and the `dx_I` coefficient basis of k-forms.
pub fn multi_indices(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, k));
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        if k == 0 {
            break;
        }
        // advance to the next increasing tuple
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

fn det_small(m: &DMatrix<f64>) -> f64 {
    match m.nrows() {
        0 => 1.0,
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        3 => {
            m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
                - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
                + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
        }
        _ => m.clone().lu().determinant(),
    }
}

/// Degree-k compound of a square matrix: entry (I, J) is the minor of the
/// rows I and columns J. `compound(m, 0)` is the 1×1 matrix [1] and
/// `compound(m, n)` is `[det m]`.
pub fn compound(m: &DMatrix<f64>, k: usize) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::InvalidInput("compound requires a square matrix".into()));
    }
    if k > n {
        return Err(Error::DegreeOutOfRange { degree: k, dim: n });
    }
    let idx = multi_indices(n, k);
    let d = idx.len();
    let mut out = DMatrix::<f64>::zeros(d, d);
    let mut sub = DMatrix::<f64>::zeros(k, k);
    for (a, rows) in idx.iter().enumerate() {
        for (b, cols) in idx.iter().enumerate() {
            for (i, &r) in rows.iter().enumerate() {
                for (j, &c) in cols.iter().enumerate() {
                    sub[(i, j)] = m[(r, c)];
                }
            }
            out[(a, b)] = det_small(&sub);
        }
    }
    Ok(out)
}

/// Exact integer determinant by fraction-free (Bareiss) elimination.
pub fn det_int(m: &DMatrix<i64>) -> i128 {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "det_int requires a square matrix");
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| m[(i, j)] as i128).collect())
        .collect();
    let mut sign: i128 = 1;
    let mut prev: i128 = 1;
    for p in 0..n - 1 {
        if a[p][p] == 0 {
            let Some(swap) = (p + 1..n).find(|&r| a[r][p] != 0) else {
                return 0;
            };
            a.swap(p, swap);
            sign = -sign;
        }
        for i in p + 1..n {
            for j in p + 1..n {
                a[i][j] = (a[p][p] * a[i][j] - a[i][p] * a[p][j]) / prev;
            }
            a[i][p] = 0;
        }
        prev = a[p][p];
    }
    sign * a[n - 1][n - 1]
}

/// Exact integer compound matrix (minors over the integers).
pub fn compound_int(m: &DMatrix<i64>, k: usize) -> Result<DMatrix<i64>> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::InvalidInput("compound requires a square matrix".into()));
    }
    if k > n {
        return Err(Error::DegreeOutOfRange { degree: k, dim: n });
    }
    let idx = multi_indices(n, k);
    let d = idx.len();
    let mut out = DMatrix::<i64>::zeros(d, d);
    for (a, rows) in idx.iter().enumerate() {
        for (b, cols) in idx.iter().enumerate() {
            let mut sub = DMatrix::<i64>::zeros(k, k);
            for (i, &r) in rows.iter().enumerate() {
                for (j, &c) in cols.iter().enumerate() {
                    sub[(i, j)] = m[(r, c)];
                }
            }
            let d128 = det_int(&sub);
            out[(a, b)] = i64::try_from(d128)
                .map_err(|_| Error::Numeric(format!("integer minor overflow: {d128}")))?;
        }
    }
    Ok(out)
}

fn ensure_finite(m: &DMatrix<f64>, what: &str) -> Result<()> {
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(what.into()));
    }
    Ok(())
}

/// Euclidean operator norm (largest singular value).
pub fn operator_norm(m: &DMatrix<f64>) -> Result<f64> {
    ensure_finite(m, "operator_norm input")?;
    if m.is_empty() {
        return Ok(0.0);
    }
    let sv = m
        .clone()
        .try_svd(false, false, f64::EPSILON, 200)
        .ok_or_else(|| Error::Numeric("SVD failed to converge".into()))?
        .singular_values;
    Ok(sv.max())
}

/// Spectral radius (max modulus over all eigenvalues) of a real square matrix.
pub fn spectral_radius(m: &DMatrix<f64>) -> Result<f64> {
    ensure_finite(m, "spectral_radius input")?;
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::InvalidInput("spectral_radius requires a square matrix".into()));
    }
    if n == 0 {
        return Ok(0.0);
    }
    let eigs = m
        .clone()
        .try_schur(f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numeric("Schur decomposition failed to converge".into()))?
        .complex_eigenvalues();
    Ok(eigs.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// One eigenvalue of a real matrix together with a unit eigenvector and
/// its algebraic multiplicity. Eigenvalues are clustered to relative
/// tolerance 1e-8 before eigenvectors are extracted, so a defective
/// eigenvalue yields a single entry carrying its full multiplicity.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: Complex<f64>,
    pub vector: DVector<Complex<f64>>,
    pub multiplicity: usize,
}

/// Eigenvalues (clustered) and eigenvectors of a real square matrix.
///
/// Eigenvalues come from the real Schur form; each cluster's eigenvector is
/// the smallest-singular-value direction of A − λI over the complex field.
pub fn complex_eigenpairs(m: &DMatrix<f64>) -> Result<Vec<EigenPair>> {
    ensure_finite(m, "eigen input")?;
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::InvalidInput("eigen requires a square matrix".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let eigs = m
        .clone()
        .try_schur(f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numeric("Schur decomposition failed to converge".into()))?
        .complex_eigenvalues();
    let scale = eigs.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let tol = 1e-8 * scale;

    let mut values: Vec<Complex<f64>> = eigs.iter().copied().collect();
    // sort by (Re desc, Im asc) for a deterministic listing
    values.sort_by(|a, b| {
        b.re.partial_cmp(&a.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });

    let mc: DMatrix<Complex<f64>> = m.map(|v| Complex::new(v, 0.0));
    let mut out: Vec<EigenPair> = Vec::new();
    for z in values {
        if let Some(prev) = out.iter_mut().find(|p| (p.value - z).norm() <= tol) {
            prev.multiplicity += 1;
            continue;
        }
        let mut shifted = mc.clone();
        for i in 0..n {
            shifted[(i, i)] -= z;
        }
        let svd = shifted
            .try_svd(false, true, f64::EPSILON, 200)
            .ok_or_else(|| Error::Numeric("complex SVD failed to converge".into()))?;
        let vt = svd
            .v_t
            .ok_or_else(|| Error::Numeric("SVD returned no right singular vectors".into()))?;
        // last right singular vector spans the near-null space
        let row = vt.row(vt.nrows() - 1);
        let mut v = DVector::<Complex<f64>>::from_iterator(n, row.iter().map(|c| c.conj()));
        // fix the phase: largest-modulus entry made real positive
        let (mut pivot, mut best) = (Complex::new(1.0, 0.0), 0.0);
        for c in v.iter() {
            if c.norm() > best {
                best = c.norm();
                pivot = *c;
            }
        }
        if best > 0.0 {
            let phase = pivot / pivot.norm();
            v = v.map(|c| c / phase);
        }
        let nv = v.norm();
        if nv > 0.0 {
            v /= Complex::new(nv, 0.0);
        }
        out.push(EigenPair { value: z, vector: v, multiplicity: 1 });
    }
    Ok(out)
}

/// Residual ‖Av − λv‖ of an eigenpair.
pub fn eigen_residual(m: &DMatrix<f64>, pair: &EigenPair) -> f64 {
    let mc: DMatrix<Complex<f64>> = m.map(|v| Complex::new(v, 0.0));
    (&mc * &pair.vector - pair.vector.map(|c| c * pair.value)).norm()
}

/// Symmetric positive-semidefinite Gram matrix with a tag naming the frame
/// its entries are expressed in.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    entries: DMatrix<f64>,
    basis: String,
}

impl GramMatrix {
    /// Validates symmetry (1e-12 relative) and eigenvalues ≥ −1e-10.
    pub fn new(entries: DMatrix<f64>, basis: impl Into<String>) -> Result<Self> {
        let n = entries.nrows();
        if entries.ncols() != n {
            return Err(Error::InvalidInput("Gram matrix must be square".into()));
        }
        ensure_finite(&entries, "Gram matrix")?;
        let scale = entries.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
        for i in 0..n {
            for j in i + 1..n {
                if (entries[(i, j)] - entries[(j, i)]).abs() > 1e-12 * scale {
                    return Err(Error::InvalidInput(format!(
                        "Gram matrix asymmetric at ({i},{j})"
                    )));
                }
            }
        }
        let sym = (&entries + entries.transpose()) * 0.5;
        let min_eig = sym.symmetric_eigen().eigenvalues.min();
        if min_eig < -1e-10 * scale.max(1.0) {
            return Err(Error::InvalidInput(format!(
                "Gram matrix not positive semidefinite: min eigenvalue {min_eig}"
            )));
        }
        Ok(Self { entries, basis: basis.into() })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn basis(&self) -> &str {
        &self.basis
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.norm()
    }

    /// Symmetric square root via eigendecomposition (negative rounding
    /// clamped to zero).
    pub fn sqrt(&self) -> DMatrix<f64> {
        sym_pow(&self.entries, 0.5)
    }

    /// Inverse symmetric square root; requires strictly positive spectrum.
    pub fn inv_sqrt(&self) -> Result<DMatrix<f64>> {
        let eig = ((&self.entries + self.entries.transpose()) * 0.5).symmetric_eigen();
        if eig.eigenvalues.min() <= 0.0 {
            return Err(Error::Numeric("Gram matrix is singular; no inverse square root".into()));
        }
        Ok(sym_pow(&self.entries, -0.5))
    }
}

fn sym_pow(m: &DMatrix<f64>, p: f64) -> DMatrix<f64> {
    let eig = ((m + m.transpose()) * 0.5).symmetric_eigen();
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| v.max(0.0).powf(p)));
    &eig.eigenvectors * d * eig.eigenvectors.transpose()
}

/// Gram matrix induced on the k-th exterior power: the degree-k compound.
/// Positive semidefinite by construction (minors of a PSD matrix pattern).
pub fn induced_gram_power(g: &GramMatrix, k: usize) -> Result<GramMatrix> {
    let comp = compound(g.entries(), k)?;
    GramMatrix::new(comp, format!("{}^({k})", g.basis()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
        DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0))
    }

    fn random_spd(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
        let b = random_matrix(rng, n);
        &b * b.transpose() + DMatrix::identity(n, n) * 0.05
    }

    #[test]
    fn multi_indices_lexicographic() {
        assert_eq!(multi_indices(4, 2), vec![
            vec![0, 1], vec![0, 2], vec![0, 3],
            vec![1, 2], vec![1, 3], vec![2, 3],
        ]);
        assert_eq!(multi_indices(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(multi_indices(3, 3), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn compound_of_diagonal_is_products() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 3.0, 5.0]));
        let c = compound(&m, 2).unwrap();
        let expect = DMatrix::from_diagonal(&DVector::from_vec(vec![6.0, 10.0, 15.0]));
        assert!((c - expect).norm() < 1e-12);
    }

    #[test]
    fn compound_top_degree_is_determinant() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 1.0]);
        let c = compound(&m, 2).unwrap();
        assert_eq!(c.nrows(), 1);
        assert!((c[(0, 0)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn compound_degree_zero_is_one() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 1.0]);
        let c = compound(&m, 0).unwrap();
        assert_eq!(c.nrows(), 1);
        assert_eq!(c[(0, 0)], 1.0);
    }

    #[test]
    fn compound_functoriality_random_pairs() {
        // compound(AB,k) = compound(A,k) compound(B,k) on 200 random pairs
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for trial in 0..200 {
            let n = rng.gen_range(2..=6);
            let a = random_matrix(&mut rng, n);
            let b = random_matrix(&mut rng, n);
            let ab = &a * &b;
            for k in 1..=n {
                let lhs = compound(&ab, k).unwrap();
                let rhs = compound(&a, k).unwrap() * compound(&b, k).unwrap();
                let scale = lhs.norm().max(1e-30);
                assert!(
                    (&lhs - &rhs).norm() <= 1e-10 * scale.max(1.0),
                    "functoriality failed at trial {trial}, n={n}, k={k}"
                );
            }
        }
    }

    #[test]
    fn operator_norm_known_values() {
        assert!((operator_norm(&DMatrix::identity(4, 4)).unwrap() - 1.0).abs() < 1e-12);
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, -3.0]));
        assert!((operator_norm(&d).unwrap() - 3.0).abs() < 1e-12);
        // symmetric matrix: norm equals largest eigenvalue (3+sqrt(5))/2
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 1.0]);
        let expect = (3.0 + 5.0_f64.sqrt()) / 2.0;
        assert!((operator_norm(&a).unwrap() - expect).abs() < 1e-10);
    }

    #[test]
    fn operator_norm_rejects_non_finite() {
        let m = DMatrix::from_row_slice(2, 2, &[f64::NAN, 0.0, 0.0, 1.0]);
        assert!(operator_norm(&m).is_err());
    }

    #[test]
    fn spectral_radius_known_values() {
        let unipotent = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert!((spectral_radius(&unipotent).unwrap() - 1.0).abs() < 1e-9);
        let cat = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 1.0]);
        let expect = (3.0 + 5.0_f64.sqrt()) / 2.0;
        assert!((spectral_radius(&cat).unwrap() - expect).abs() < 1e-9);
        let rot = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        assert!((spectral_radius(&rot).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn spectral_radius_below_operator_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(2..=5);
            let m = random_matrix(&mut rng, n);
            let sp = spectral_radius(&m).unwrap();
            let on = operator_norm(&m).unwrap();
            assert!(sp <= on + 1e-9, "sp={sp} > norm={on}");
        }
    }

    #[test]
    fn eigenpairs_cat_map() {
        let cat = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 1.0]);
        let pairs = complex_eigenpairs(&cat).unwrap();
        assert_eq!(pairs.len(), 2);
        let golden = (3.0 + 5.0_f64.sqrt()) / 2.0;
        assert!((pairs[0].value.re - golden).abs() < 1e-10);
        assert!((pairs[1].value.re - 1.0 / golden).abs() < 1e-10);
        for p in &pairs {
            assert!(eigen_residual(&cat, p) < 1e-9, "residual too large");
        }
    }

    #[test]
    fn eigenpairs_defective_shear() {
        let shear = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        let pairs = complex_eigenpairs(&shear).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].multiplicity, 2);
        assert!(eigen_residual(&shear, &pairs[0]) < 1e-9);
    }

    #[test]
    fn eigenpairs_rotation_conjugate_pair() {
        let rot = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let pairs = complex_eigenpairs(&rot).unwrap();
        assert_eq!(pairs.len(), 2);
        for p in &pairs {
            assert!((p.value.norm() - 1.0).abs() < 1e-10);
            assert!(p.value.re.abs() < 1e-10);
            assert!(eigen_residual(&rot, p) < 1e-9);
        }
    }

    #[test]
    fn det_int_matches_known() {
        let m = DMatrix::from_row_slice(3, 3, &[2, 0, 1, 0, 1, 0, 1, 0, 1]);
        assert_eq!(det_int(&m), 1);
        let swap = DMatrix::from_row_slice(2, 2, &[0, 1, 1, 0]);
        assert_eq!(det_int(&swap), -1);
        let singular = DMatrix::from_row_slice(2, 2, &[1, 2, 2, 4]);
        assert_eq!(det_int(&singular), 0);
    }

    #[test]
    fn compound_int_matches_float() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..20 {
            let n = rng.gen_range(2..=5);
            let mi = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-3i64..=3));
            let mf = mi.map(|v| v as f64);
            for k in 0..=n {
                let ci = compound_int(&mi, k).unwrap().map(|v| v as f64);
                let cf = compound(&mf, k).unwrap();
                assert!((ci - cf).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn induced_gram_identity_and_diag() {
        let g = GramMatrix::new(DMatrix::identity(4, 4), "g").unwrap();
        for k in 0..=4 {
            let gk = induced_gram_power(&g, k).unwrap();
            let d = binomial(4, k);
            assert!((gk.entries() - DMatrix::identity(d, d)).norm() < 1e-12);
        }
        let g2 = GramMatrix::new(
            DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 3.0])),
            "g",
        )
        .unwrap();
        let top = induced_gram_power(&g2, 2).unwrap();
        assert!((top.entries()[(0, 0)] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn induced_gram_eigenvalues_are_products() {
        // eigenvalues of compound(G,k) are k-fold products of eigenvalues of G
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..20 {
            let n = rng.gen_range(2..=5);
            let g = GramMatrix::new(random_spd(&mut rng, n), "g").unwrap();
            let base: Vec<f64> = g
                .entries()
                .clone()
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .copied()
                .collect();
            for k in 1..=n {
                let gk = induced_gram_power(&g, k).unwrap();
                let mut got: Vec<f64> = gk
                    .entries()
                    .clone()
                    .symmetric_eigen()
                    .eigenvalues
                    .iter()
                    .copied()
                    .collect();
                let mut expect: Vec<f64> = multi_indices(n, k)
                    .iter()
                    .map(|idx| idx.iter().map(|&i| base[i]).product())
                    .collect();
                got.sort_by(|a, b| a.partial_cmp(b).unwrap());
                expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let scale = expect.iter().fold(1.0_f64, |a, &v| a.max(v.abs()));
                for (g, e) in got.iter().zip(&expect) {
                    assert!((g - e).abs() <= 1e-9 * scale, "k={k}: {g} vs {e}");
                }
            }
        }
    }

    #[test]
    fn gram_rejects_asymmetric_and_indefinite() {
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.2, 1.0]);
        assert!(GramMatrix::new(asym, "g").is_err());
        let indef = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(GramMatrix::new(indef, "g").is_err());
    }

    #[test]
    fn gram_norm_comparison_under_domination() {
        // G ⪯ C·H implies compound(G,k) ⪯ C^k compound(H,k), tested on
        // random SPD pairs and random k-vectors.
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..200 {
            let n = rng.gen_range(2..=5);
            let g = GramMatrix::new(random_spd(&mut rng, n), "g").unwrap();
            let h = GramMatrix::new(random_spd(&mut rng, n), "h").unwrap();
            let hs = h.inv_sqrt().unwrap();
            let c = (&hs * g.entries() * &hs).symmetric_eigen().eigenvalues.max();
            for k in 1..=n {
                let gk = induced_gram_power(&g, k).unwrap();
                let hk = induced_gram_power(&h, k).unwrap();
                let d = binomial(n, k);
                for _ in 0..5 {
                    let w = DVector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0));
                    let lhs = (w.transpose() * gk.entries() * &w)[(0, 0)];
                    let rhs = c.powi(k as i32) * (w.transpose() * hk.entries() * &w)[(0, 0)];
                    assert!(lhs <= rhs + 1e-9, "k={k}: {lhs} > C^k {rhs}");
                }
            }
        }
    }

    #[test]
    fn compound_rejects_bad_degree() {
        let m = DMatrix::identity(3, 3);
        assert!(compound(&m, 4).is_err());
    }
}
