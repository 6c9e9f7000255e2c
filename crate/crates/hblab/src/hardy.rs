//! Hardy-space inner products, the conjugate-analytic Toeplitz operator in
//! three computation paths, and the `H(b)` inner product with its Gram
//! matrices.

use num_traits::Zero;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pairs::CanonicalPair;
use crate::polyalg::{PoleClass, Polynomial, RationalFunction, UnimodularPoint};
use crate::{linalg, max_series_terms, Complex};

/// `<f, g>_2 = sum f_k conj(g_k)` for polynomials; exact in floating point.
pub fn h2_inner(f: &Polynomial, g: &Polynomial) -> Complex {
    let n = f.coeffs().len().min(g.coeffs().len());
    let mut acc = Complex::zero();
    for k in 0..n {
        acc += f.coeff(k) * g.coeff(k).conj();
    }
    acc
}

pub fn h2_norm_sq(f: &Polynomial) -> f64 {
    h2_inner(f, f).re
}

/// `<f, g>_2` for rational functions whose poles all lie outside the closed
/// disk. The Taylor series is truncated where the geometric tail bound
/// (smallest pole moduli, envelope fitted from the computed coefficients
/// with a 2x safety factor) drops below `tol`.
pub fn h2_inner_rational(
    f: &RationalFunction,
    g: &RationalFunction,
    tol: f64,
) -> Result<Complex> {
    for h in [f, g] {
        if h.pole_class() != PoleClass::OutsideClosedDisk {
            return Err(Error::PoleNotOutside);
        }
    }
    if f.is_zero() || g.is_zero() {
        return Ok(Complex::zero());
    }

    let deg_sum = |h: &RationalFunction| {
        h.num().degree().unwrap_or(0) + h.den().degree().unwrap_or(0)
    };
    // With a polynomial on either side the pairing is a finite exact sum.
    let poly_cut = [f, g]
        .iter()
        .filter(|h| h.den().degree().unwrap_or(0) == 0)
        .map(|h| h.num().degree().unwrap_or(0))
        .min();
    if let Some(cut) = poly_cut {
        let fc = f.taylor_coeffs(cut)?;
        let gc = g.taylor_coeffs(cut)?;
        let mut acc = Complex::zero();
        for k in 0..=cut {
            acc += fc[k] * gc[k].conj();
        }
        return Ok(acc);
    }

    let sigma = f.min_pole_modulus() * g.min_pole_modulus();
    let ln_sigma = sigma.ln();
    let window = 16 + deg_sum(f) + deg_sum(g);
    let mut k_hi = 2 * window + 32;
    let cap = max_series_terms();
    loop {
        let fc = f.taylor_coeffs(k_hi)?;
        let gc = g.taylor_coeffs(k_hi)?;
        let mut acc = Complex::zero();
        for k in 0..=k_hi {
            acc += fc[k] * gc[k].conj();
        }
        // Envelope |t_k| <= C sigma^{-k} fitted over the trailing window.
        let mut ln_c = f64::NEG_INFINITY;
        for k in (k_hi - window)..=k_hi {
            let t = fc[k].norm() * gc[k].norm();
            if t > 0.0 {
                ln_c = ln_c.max(t.ln() + k as f64 * ln_sigma);
            }
        }
        if ln_c == f64::NEG_INFINITY {
            return Ok(acc); // series terminated identically
        }
        let ln_tail = std::f64::consts::LN_2 + ln_c - (k_hi + 1) as f64 * ln_sigma
            - (1.0 - 1.0 / sigma).ln();
        if ln_tail < tol.ln() {
            return Ok(acc);
        }
        k_hi *= 2;
        if k_hi > cap {
            return Err(Error::Convergence { terms: cap });
        }
    }
}

/// Matrix realization of `T_phibar` on a polynomial of degree `d`:
/// coefficient `j` of the output is `sum_{i=j}^{d} f_i conj(phihat_{i-j})`,
/// a finite exact sum using the Taylor coefficients of the symbol.
pub fn toeplitz_conj_coeff(phi: &RationalFunction, f: &Polynomial) -> Result<Polynomial> {
    let d = match f.degree() {
        Some(d) => d,
        None => return Ok(Polynomial::zero()),
    };
    let ph = phi.taylor_coeffs(d)?;
    let coeffs = (0..=d)
        .map(|j| {
            let mut acc = Complex::zero();
            for i in j..=d {
                acc += f.coeff(i) * ph[i - j].conj();
            }
            acc
        })
        .collect();
    Ok(Polynomial::new(coeffs))
}

/// Closed form of `T_phibar` for the symbol
/// `phi_lambda^m = (conj(lambda) z)^m / (1 - conj(lambda) z)^m`:
///
/// `T f = lambda^m (f - T_{m-1}(f, lambda)) / (z - lambda)^m`,
///
/// computed by Taylor section and exact synthetic division (the remainder of
/// each division must vanish).
pub fn toeplitz_conj_closed(
    lambda: &UnimodularPoint,
    m: usize,
    f: &Polynomial,
) -> Result<Polynomial> {
    if m == 0 {
        return Err(Error::InvalidInput("order m must be positive".into()));
    }
    let section = f.taylor_section(lambda, m);
    let mut q = &*f - &section;
    let scale = f.l2_norm().max(1e-300);
    for _ in 0..m {
        let (next, rem) = q.synth_div(lambda.value());
        if rem.norm() > 1e-10 * scale {
            return Err(Error::Inconsistent(format!(
                "Taylor section left a nonzero remainder {:.3e}",
                rem.norm()
            )));
        }
        q = next;
    }
    Ok(q.scale(lambda.powi(m as i32)))
}

/// `T_phibar(a f)` for a polynomial `f`: multiplication by `a` followed by the
/// conjugate Toeplitz action lands back on a rational function with all poles
/// outside the closed disk,
///
/// `T_phibar(a f) = (-1)^m conj(lambda_1 ... lambda_m) reflect(p, m) f / r`.
pub fn toeplitz_conj_on_a_multiple(
    pair: &CanonicalPair,
    f: &Polynomial,
) -> Result<RationalFunction> {
    let m = pair.m();
    let ptilde = pair.p().reflect(m)?;
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let constant = pair.lambda_product().conj() * sign;
    let num = (&ptilde * f).scale(constant);
    RationalFunction::new(num, pair.r().clone())
}

/// `<f, g>_b = <f, g>_2 + <T_phibar f, T_phibar g>_2` with the symbol kept in
/// the un-reduced form `p / prod(1 - conj(lambda_j) z)`.
pub fn hb_inner(pair: &CanonicalPair, f: &Polynomial, g: &Polynomial) -> Result<Complex> {
    let phi = pair.phi()?;
    let tf = toeplitz_conj_coeff(&phi, f)?;
    let tg = toeplitz_conj_coeff(&phi, g)?;
    Ok(h2_inner(f, g) + h2_inner(&tf, &tg))
}

/// `||f||_b^2`.
pub fn hb_norm_sq(pair: &CanonicalPair, f: &Polynomial) -> Result<f64> {
    Ok(hb_inner(pair, f, f)?.re)
}

/// Gram matrix of the monomials `z^0..z^N` in the `H(b)` inner product.
/// Hermitian positive definite with unit-or-larger diagonal.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    basis_degree: usize,
    entries: Vec<Complex>,
    pair: CanonicalPair,
}

/// Assembles the Gram matrix from the Taylor coefficients of the symbol:
/// `G(i,j) = delta_ij + sum_{l <= min(i,j)} conj(phihat_{i-l}) phihat_{j-l}`.
pub fn hb_gram(pair: &CanonicalPair, basis_degree: usize) -> Result<GramMatrix> {
    let n = basis_degree + 1;
    let ph = pair.phi()?.taylor_coeffs(basis_degree)?;
    let mut entries = vec![Complex::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = if i == j {
                Complex::new(1.0, 0.0)
            } else {
                Complex::zero()
            };
            for l in 0..=i.min(j) {
                acc += ph[i - l].conj() * ph[j - l];
            }
            entries[i * n + j] = acc;
        }
    }
    Ok(GramMatrix {
        basis_degree,
        entries,
        pair: pair.clone(),
    })
}

impl GramMatrix {
    pub fn basis_degree(&self) -> usize {
        self.basis_degree
    }

    pub fn pair(&self) -> &CanonicalPair {
        &self.pair
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex {
        self.entries[i * (self.basis_degree + 1) + j]
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    /// Worst deviation from Hermitian symmetry.
    pub fn hermitian_residual(&self) -> f64 {
        let n = self.basis_degree + 1;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.entry(i, j) - self.entry(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Positive definiteness via Cholesky pivots.
    pub fn is_positive_definite(&self) -> bool {
        linalg::cholesky(&self.entries, self.basis_degree + 1).is_some()
    }

    /// Smallest and largest eigenvalue.
    pub fn eigen_extremes(&self) -> (f64, f64) {
        let eig = linalg::hermitian_eigenvalues(&self.entries, self.basis_degree + 1);
        (eig[0], eig[eig.len() - 1])
    }
}

// JSON form: {"n": N, "entries": [[re, im], ...]} row-major.
impl Serialize for GramMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("GramMatrix", 2)?;
        s.serialize_field("n", &self.basis_degree)?;
        let pairs: Vec<[f64; 2]> = self.entries.iter().map(|c| [c.re, c.im]).collect();
        s.serialize_field("entries", &pairs)?;
        s.end()
    }
}

/// `|<f, P_N k_w^b>_b - f(w)|` where `P_N k_w^b` is the degree-`N` Taylor
/// truncation of the reproducing kernel at `w`. Decays geometrically in `N`
/// for `|w| <= 0.9`.
pub fn reproducing_check(
    pair: &CanonicalPair,
    f: &Polynomial,
    w: Complex,
    n: usize,
) -> Result<f64> {
    if w.norm() > 0.9 {
        return Err(Error::OutsideDomain { modulus: w.norm() });
    }
    let kernel = pair.kernel_truncated(w, n)?;
    let ip = hb_inner(pair, f, &kernel)?;
    Ok((ip - f.eval(w)).norm())
}
