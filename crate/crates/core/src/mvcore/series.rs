use num_complex::Complex64;

use super::multivector::{Multivector, Tolerance};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_DEGREE: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesFn {
    Exp,
    Sinh,
    Cosh,
}

impl SeriesFn {
    fn keeps(self, degree: usize) -> bool {
        match self {
            SeriesFn::Exp => true,
            SeriesFn::Sinh => degree % 2 == 1,
            SeriesFn::Cosh => degree & 1 == 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesOutcome {
    pub value: Multivector,
    /// Number of nonzero power terms `a^k / k!` that were generated.
    pub terms_used: usize,
}

/// Partial sum of `f(a)` under the Clifford product. Stops as soon as a
/// power term `a^k / k!` falls to `eq_tol`; nilpotent arguments therefore
/// truncate exactly.
pub fn series_apply(
    f: SeriesFn,
    a: &Multivector,
    max_deg: usize,
    tol: Tolerance,
) -> Result<SeriesOutcome> {
    series_with(f, a, max_deg, tol, |x, y| x.gmul(y))
}

/// Same as [`series_apply`] with a caller supplied product.
pub fn series_with<P>(
    f: SeriesFn,
    a: &Multivector,
    max_deg: usize,
    tol: Tolerance,
    mut product: P,
) -> Result<SeriesOutcome>
where
    P: FnMut(&Multivector, &Multivector) -> Result<Multivector>,
{
    if max_deg < 1 {
        return Err(Error::BadParameter("max_deg must be at least 1".into()));
    }
    let sig = a.signature();
    let mut value = if f.keeps(0) {
        Multivector::one(sig)
    } else {
        Multivector::zero(sig)
    };
    let mut term = Multivector::one(sig);
    let mut last_norm = term.norm_max();
    for k in 1..=max_deg {
        term = product(&term, a)?.scale(Complex64::new(1.0 / k as f64, 0.0));
        last_norm = term.norm_max();
        if last_norm <= tol.eq_tol {
            return Ok(SeriesOutcome {
                value,
                terms_used: k - 1,
            });
        }
        if f.keeps(k) {
            value += &term;
        }
    }
    Err(Error::SeriesNotConverged { last_norm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mvcore::Signature;

    #[test]
    fn exp_of_zero_is_one() {
        let s = Signature::cl13();
        let out = series_apply(
            SeriesFn::Exp,
            &Multivector::zero(&s),
            32,
            Tolerance::default(),
        )
        .unwrap();
        assert_eq!(out.value, Multivector::one(&s));
        assert_eq!(out.terms_used, 0);
    }

    #[test]
    fn exp_of_a_bivector_matches_the_closed_form() {
        // (e1 e2)^2 = -1 in Cl(3,0): exp(t e12) = cos t + sin t e12.
        let s = Signature::cl30();
        let t = 0.7;
        let b = Multivector::blade(&s, &[0, 1], t).unwrap();
        let out = series_apply(SeriesFn::Exp, &b, 32, Tolerance::default()).unwrap();
        let expect = Multivector::from_terms(
            &s,
            [
                (0, Complex64::new(t.cos(), 0.0)),
                (0b11, Complex64::new(t.sin(), 0.0)),
            ],
        );
        // truncation error is bounded by the first dropped term (<= eq_tol)
        assert!(out.value.dist(&expect).unwrap() < 1e-12);
        let sinh = series_apply(SeriesFn::Sinh, &b, 32, Tolerance::default()).unwrap();
        assert!((sinh.value.coeff(0b11).re - t.sin()).abs() < 1e-12);
        assert_eq!(sinh.value.coeff(0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn cosh_of_a_real_scalar() {
        let s = Signature::cl30();
        let out = series_apply(
            SeriesFn::Cosh,
            &Multivector::scalar(&s, 1.5),
            32,
            Tolerance::default(),
        )
        .unwrap();
        assert!((out.value.scalar_part().re - 1.5f64.cosh()).abs() < 1e-12);
    }

    #[test]
    fn reports_non_convergence_with_the_last_norm() {
        let s = Signature::cl30();
        let err = series_apply(
            SeriesFn::Exp,
            &Multivector::scalar(&s, 40.0),
            4,
            Tolerance::default(),
        )
        .unwrap_err();
        match err {
            Error::SeriesNotConverged { last_norm } => {
                assert!((last_norm - 40f64.powi(4) / 24.0).abs() < 1e-6)
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(series_apply(
            SeriesFn::Exp,
            &Multivector::zero(&s),
            0,
            Tolerance::default()
        )
        .is_err());
    }
}
