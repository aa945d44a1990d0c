use super::design::{hermitian_basis, trace_preservation_elements, Design};
use crate::error::{Error, Result};
use crate::linalg::{trace_product, ComplexMatrix};
use crate::quantum::ChiMatrix;
use nalgebra::{DMatrix, DVector};

/// Rank of the real design matrix (relative singular-value cutoff 1e-10).
pub fn design_rank(design: &Design, trace_preserving: bool) -> usize {
    let (a, _) = system(design, &vec![0.0; design.len()], trace_preserving);
    rank_of(&a)
}

fn rank_of(a: &DMatrix<f64>) -> usize {
    let sv = a.clone().svd(false, false).singular_values;
    let top = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > 1e-10 * top).count()
}

fn system(design: &Design, probabilities: &[f64], trace_preserving: bool) -> (DMatrix<f64>, DVector<f64>) {
    let basis = hermitian_basis(design.dim());
    let mut rows: Vec<(Vec<f64>, f64)> = design
        .rows()
        .iter()
        .zip(probabilities)
        .map(|(g, &p)| (basis.iter().map(|b| trace_product(g, b).re).collect(), p))
        .collect();
    if trace_preserving {
        for (j, q) in trace_preservation_elements().iter().enumerate() {
            let target = if j == 0 { 1.0 } else { 0.0 };
            rows.push((basis.iter().map(|b| trace_product(q, b).re).collect(), target));
        }
    }
    let a = DMatrix::from_fn(rows.len(), basis.len(), |i, k| rows[i].0[k]);
    let b = DVector::from_iterator(rows.len(), rows.iter().map(|r| r.1));
    (a, b)
}

/// Unconstrained least-squares solution of `p = Tr(G_i X)` over Hermitian
/// `X`. No positivity guarantee.
pub fn linear_inversion(design: &Design, probabilities: &[f64], trace_preserving: bool) -> Result<ComplexMatrix> {
    if probabilities.len() != design.len() {
        return Err(Error::dim(design.len(), probabilities.len()));
    }
    let (a, b) = system(design, probabilities, trace_preserving);
    let params = a.ncols();
    let rank = rank_of(&a);
    if rank < params {
        return Err(Error::UnderDetermined { rank, params, null_dim: params - rank });
    }
    let svd = a.svd(true, true);
    let x = svd.solve(&b, 1e-12).map_err(|e| Error::InvalidData(e.to_string()))?;
    let basis = hermitian_basis(design.dim());
    let mut out = ComplexMatrix::zeros(design.dim(), design.dim());
    for (coef, bk) in x.iter().zip(&basis) {
        out += bk.scale(*coef);
    }
    Ok(out)
}

/// Linear-inversion estimate of χ (possibly unphysical).
pub fn linear_inversion_qpt(design: &Design, probabilities: &[f64], trace_preserving: bool) -> Result<ChiMatrix> {
    ChiMatrix::from_raw(linear_inversion(design, probabilities, trace_preserving)?)
}
