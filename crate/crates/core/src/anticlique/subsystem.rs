use alloc::vec;
use alloc::vec::Vec;

use super::{AnticliqueCertificate, AnticliqueMethod};
use crate::linalg::{complement_frame, orthonormalize, ComplexMatrix, OrthonormalFrame, Projection, C64};
use crate::opsys::make_system;
use crate::{Error, OperatorSystem, Result, Tolerances};

/// `{sum a_i P_i : a in E}` as an operator system, where `E` is spanned by
/// `coefficients` (real vectors of length `r`) together with the all-ones
/// vector.
pub fn subsystem_of_resolution(projections: &[Projection], coefficients: &[Vec<f64>]) -> Result<OperatorSystem> {
    let n = resolution_size(projections)?;
    let mats: Vec<ComplexMatrix> = projections.iter().map(Projection::matrix).collect();
    let gens = coefficients
        .iter()
        .map(|a| {
            let mut m = ComplexMatrix::zeros(n, n);
            for (ai, p) in a.iter().zip(&mats) {
                m.axpy(C64::new(*ai, 0.0), p);
            }
            m
        })
        .collect();
    make_system(n, gens, "subsystem of a resolution")
}

/// An anticlique for a proper subsystem of `span(P_1, ..., P_r)` where the
/// `P_i` sum to the identity.
///
/// A unit `b` orthogonal to `E` has entries of both signs; its positive and
/// negative parts are rescaled to sum to one, and matching orthonormal basis
/// vectors of the ranges are mixed with weights `sqrt(|b_i|)`. The rank is
/// the smallest rank among strictly positive entries plus the smallest rank
/// among strictly negative entries, hence at least the sum of the two
/// smallest ranks.
pub fn subsystem_anticlique(
    projections: &[Projection],
    coefficients: &[Vec<f64>],
    tol: &Tolerances,
) -> Result<AnticliqueCertificate> {
    let n = resolution_size(projections)?;
    let r = projections.len();
    let mut total = ComplexMatrix::zeros(n, n);
    for p in projections {
        total = total.add(&p.matrix());
    }
    let defect = total.sub(&ComplexMatrix::identity(n)).frobenius_norm();
    if defect > tol.certify_tol {
        return Err(Error::NotResolution { defect });
    }
    if coefficients.iter().any(|a| a.len() != r) {
        return Err(Error::ShapeMismatch(alloc::format!("coefficient vectors must have length {r}")));
    }

    let mut span: Vec<Vec<C64>> = vec![vec![C64::new(1.0, 0.0); r]];
    span.extend(coefficients.iter().map(|a| a.iter().map(|&x| C64::new(x, 0.0)).collect()));
    let e = orthonormalize(&span, 1e-10)?;
    if e.rank() >= r {
        return Err(Error::NotProper);
    }
    let b: Vec<f64> = complement_frame(&e)?.column(0).iter().map(|z| z.re).collect();
    let cut = 1e-12 * b.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let pos: Vec<usize> = (0..r).filter(|&i| b[i] > cut).collect();
    let neg: Vec<usize> = (0..r).filter(|&i| b[i] < -cut).collect();
    let pos_sum: f64 = pos.iter().map(|&i| b[i]).sum();
    let neg_sum: f64 = neg.iter().map(|&i| -b[i]).sum();

    let bases: Vec<Vec<Vec<C64>>> = projections.iter().map(|p| p.frame().columns()).collect();
    let mut cols = Vec::new();
    for (group, sum) in [(&pos, pos_sum), (&neg, neg_sum)] {
        let width = group.iter().map(|&i| bases[i].len()).min().unwrap_or(0);
        for l in 0..width {
            let mut v = vec![C64::new(0.0, 0.0); n];
            for &i in group.iter() {
                let w = (b[i].abs() / sum).sqrt();
                v.iter_mut().zip(&bases[i][l]).for_each(|(x, y)| *x += y * w);
            }
            cols.push(v);
        }
    }
    let frame = OrthonormalFrame::from_trusted(ComplexMatrix::from_columns(n, &cols)?);
    let system = subsystem_of_resolution(projections, coefficients)?;
    AnticliqueCertificate::issue(frame, &system, tol, AnticliqueMethod::Subsystem)
}

fn resolution_size(projections: &[Projection]) -> Result<usize> {
    let Some(first) = projections.first() else {
        return Err(Error::ShapeMismatch(alloc::string::String::from("no projections")));
    };
    let n = first.ambient_dim();
    if projections.iter().any(|p| p.ambient_dim() != n) {
        return Err(Error::ShapeMismatch(alloc::string::String::from("projections of different sizes")));
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anticlique::certify_no_anticlique_projsum;
    use crate::rng::{gaussian, random_unitary, stream};
    use proptest::prelude::*;

    /// A random resolution of `I_n` with the given ranks.
    pub(crate) fn resolution(seed: u64, ranks: &[usize]) -> Vec<Projection> {
        let n: usize = ranks.iter().sum();
        let u = random_unitary(&mut stream(seed, 0), n);
        let mut start = 0;
        ranks
            .iter()
            .map(|&k| {
                let f = OrthonormalFrame::new(u.column_range(start, start + k), 1e-10).unwrap();
                start += k;
                Projection::new(f)
            })
            .collect()
    }

    #[test]
    fn two_blocks_of_rank_three() {
        let ps = resolution(1, &[3, 3]);
        let c = subsystem_anticlique(&ps, &[], &Tolerances::default()).unwrap();
        assert!(c.is_valid());
        assert_eq!(c.rank(), 6);
    }

    #[test]
    fn three_blocks_of_rank_two() {
        let ps = resolution(2, &[2, 2, 2]);
        let c = subsystem_anticlique(&ps, &[vec![-1.0, 0.5, 3.0]], &Tolerances::default()).unwrap();
        assert!(c.is_valid(), "{:?}", c.check);
        assert_eq!(c.rank(), 4);
    }

    #[test]
    fn full_coefficient_space_is_not_proper() {
        let ps = resolution(3, &[1, 2]);
        let r = subsystem_anticlique(&ps, &[vec![1.0, 0.0]], &Tolerances::default());
        assert_eq!(r.unwrap_err(), Error::NotProper);
    }

    #[test]
    fn overlapping_projections_are_rejected() {
        let mut ps = resolution(4, &[2, 2]);
        ps[1] = ps[0].clone();
        let r = subsystem_anticlique(&ps, &[], &Tolerances::default());
        assert!(matches!(r, Err(Error::NotResolution { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn minimal_resolutions_have_large_anticliques_below(seed in any::<u64>(), n in 2usize..=12, k in 1usize..=3) {
            // exactly ceil(n/k) projections of rank <= k
            let r = n.div_ceil(k);
            let mut ranks = vec![n / r; r];
            for rank in ranks.iter_mut().take(n % r) {
                *rank += 1;
            }
            prop_assume!(r >= 2 && ranks.iter().all(|&x| x <= k));
            let ps = resolution(seed, &ranks);
            prop_assert!(certify_no_anticlique_projsum(&ps, k, &Tolerances::default()));
            let mut rng = stream(seed, 1);
            let extra = (rng_dim(seed, r)).min(r - 2);
            let coeffs: Vec<Vec<f64>> = (0..extra).map(|_| (0..r).map(|_| gaussian(&mut rng)).collect()).collect();
            let c = subsystem_anticlique(&ps, &coeffs, &Tolerances::default()).unwrap();
            prop_assert!(c.is_valid());
            prop_assert!(c.rank() >= k + 1);
        }
    }

    fn rng_dim(seed: u64, r: usize) -> usize {
        (seed as usize) % r.max(1)
    }
}
