use super::MAX_DENSE_SPINS;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorLabel {
    Ix,
    Iy,
    Iz,
    TotalSpinSquared,
    HMq,
    HDz,
    Pulse,
    Propagator,
}

#[derive(Clone, Debug)]
pub struct DenseOperator {
    pub matrix: CMatrix,
    pub label: OperatorLabel,
}

/// Collective spin operators in the product basis. Bit `j` of a basis index
/// set means spin `j` points up.
#[derive(Clone, Debug)]
pub struct CollectiveOperators {
    pub spins: usize,
    pub i_plus: CMatrix,
    pub i_minus: CMatrix,
    pub ix: CMatrix,
    pub iy: CMatrix,
    pub iz: CMatrix,
    /// 2·m of every basis state (I_z eigenvalue doubled).
    pub twice_m: Vec<i32>,
}

impl CollectiveOperators {
    pub fn new(spins: usize) -> Result<Self> {
        if spins == 0 {
            return Err(Error::ZeroSpins);
        }
        if spins > MAX_DENSE_SPINS {
            return Err(Error::DenseTooLarge {
                n: spins,
                max: MAX_DENSE_SPINS,
            });
        }
        let dim = 1usize << spins;
        let twice_m: Vec<i32> = (0..dim).map(|b| 2 * (b.count_ones() as i32) - spins as i32).collect();
        let mut i_plus = CMatrix::zeros(dim, dim);
        for b in 0..dim {
            for j in 0..spins {
                if b & (1 << j) == 0 {
                    i_plus[(b | (1 << j), b)] += Complex64::new(1.0, 0.0);
                }
            }
        }
        let i_minus = i_plus.adjoint();
        let half = Complex64::new(0.5, 0.0);
        let ix = (&i_plus + &i_minus) * half;
        let iy = (&i_plus - &i_minus) * Complex64::new(0.0, -0.5);
        let iz = CMatrix::from_diagonal(&DVector::from_iterator(
            dim,
            twice_m.iter().map(|&m| Complex64::new(f64::from(m) / 2.0, 0.0)),
        ));
        Ok(Self {
            spins,
            i_plus,
            i_minus,
            ix,
            iy,
            iz,
            twice_m,
        })
    }

    pub fn dim(&self) -> usize {
        1 << self.spins
    }

    pub fn total_spin_squared(&self) -> CMatrix {
        &self.ix * &self.ix + &self.iy * &self.iy + &self.iz * &self.iz
    }

    /// -(1/4)[(I⁺)² + (I⁻)²] in units of D.
    pub fn h_mq(&self) -> CMatrix {
        (&self.i_plus * &self.i_plus + &self.i_minus * &self.i_minus) * Complex64::new(-0.25, 0.0)
    }

    /// (1/2)(3I_z² - I²) in units of D.
    pub fn h_dz(&self) -> CMatrix {
        (&self.iz * &self.iz * Complex64::new(3.0, 0.0) - self.total_spin_squared()) * Complex64::new(0.5, 0.0)
    }

    pub fn operator(&self, label: OperatorLabel) -> Option<DenseOperator> {
        let matrix = match label {
            OperatorLabel::Ix => self.ix.clone(),
            OperatorLabel::Iy => self.iy.clone(),
            OperatorLabel::Iz => self.iz.clone(),
            OperatorLabel::TotalSpinSquared => self.total_spin_squared(),
            OperatorLabel::HMq => self.h_mq(),
            OperatorLabel::HDz => self.h_dz(),
            OperatorLabel::Pulse | OperatorLabel::Propagator => return None,
        };
        Some(DenseOperator { matrix, label })
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
///
/// Delegates to faer: nalgebra's `SymmetricEigen` returns wrong eigenpairs
/// for the heavily degenerate collective operators from N = 7 on.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: CMatrix,
}

impl HermitianEigen {
    pub fn new(a: &CMatrix) -> Result<Self> {
        let n = a.nrows();
        let m = faer::Mat::<faer::c64>::from_fn(n, n, |i, j| {
            let z = a[(i, j)];
            faer::c64::new(z.re, z.im)
        });
        let eig = m
            .self_adjoint_eigen(faer::Side::Lower)
            .map_err(|e| Error::Consistency(format!("Hermitian eigensolver failed: {e:?}")))?;
        let (u, s) = (eig.U(), eig.S().column_vector());
        Ok(Self {
            eigenvalues: DVector::from_fn(n, |i, _| s[i].re),
            eigenvectors: CMatrix::from_fn(n, n, |i, j| {
                let z = u[(i, j)];
                Complex64::new(z.re, z.im)
            }),
        })
    }

    /// V·diag(f(λ))·V†.
    pub fn apply(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let v = &self.eigenvectors;
        let fd = self.eigenvalues.map(f);
        v * CMatrix::from_diagonal(&fd) * v.adjoint()
    }
}

/// f(A) = V·diag(f(λ))·V† for Hermitian `a`.
pub fn hermitian_function(a: &CMatrix, f: impl Fn(f64) -> Complex64) -> Result<CMatrix> {
    Ok(HermitianEigen::new(a)?.apply(f))
}

/// One multiplet of the coupled basis: the states |S, M⟩ for M = S, S-1, ...,
/// -S, built by lowering a highest-weight state with Condon-Shortley phases.
#[derive(Clone, Debug)]
pub struct CoupledState {
    pub twice_s: i32,
    /// Columns indexed by S - M.
    pub states: Vec<DVector<Complex64>>,
}

/// Decomposes the product space into total-spin multiplets. Highest-weight
/// states are the null space of I⁺ inside each I_z eigenspace.
pub fn coupled_basis(ops: &CollectiveOperators) -> Result<Vec<CoupledState>> {
    let n = ops.spins as i32;
    let mut out = Vec::new();
    for twice_s in (n % 2..=n).rev().step_by(2) {
        let idx: Vec<usize> = (0..ops.dim()).filter(|&b| ops.twice_m[b] == twice_s).collect();
        // I⁺ restricted to the M = S subspace
        let cols = CMatrix::from_fn(ops.dim(), idx.len(), |r, c| ops.i_plus[(r, idx[c])]);
        let gram = cols.adjoint() * &cols;
        let eig = HermitianEigen::new(&gram)?;
        for (k, &lam) in eig.eigenvalues.iter().enumerate() {
            if lam.abs() > 1e-9 {
                continue;
            }
            let mut top = DVector::zeros(ops.dim());
            for (c, &b) in idx.iter().enumerate() {
                top[b] = eig.eigenvectors[(c, k)];
            }
            let mut states = vec![top];
            let s = f64::from(twice_s) / 2.0;
            for step in 0..twice_s {
                let m = s - f64::from(step);
                let norm = (s * (s + 1.0) - m * (m - 1.0)).sqrt();
                let next = (&ops.i_minus * states.last().unwrap()) / Complex64::new(norm, 0.0);
                states.push(next);
            }
            out.push(CoupledState { twice_s, states });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sector::{build_chains, enumerate_sectors, SpinCount};

    fn comm(a: &CMatrix, b: &CMatrix) -> CMatrix {
        a * b - b * a
    }

    #[test]
    fn angular_momentum_algebra() {
        for n in 1..=6 {
            let ops = CollectiveOperators::new(n).unwrap();
            let i = Complex64::new(0.0, 1.0);
            assert!((comm(&ops.ix, &ops.iy) - &ops.iz * i).camax() < 1e-12);
            assert!((comm(&ops.iy, &ops.iz) - &ops.ix * i).camax() < 1e-12);
            let h = ops.h_dz();
            assert!(comm(&h, &ops.iz).camax() < 1e-12);
            assert!(comm(&h, &ops.total_spin_squared()).camax() < 1e-12);
            assert!(comm(&ops.h_mq(), &ops.total_spin_squared()).camax() < 1e-12);
        }
    }

    #[test]
    fn size_guard() {
        assert!(matches!(CollectiveOperators::new(11), Err(Error::DenseTooLarge { .. })));
        assert!(CollectiveOperators::new(0).is_err());
    }

    #[test]
    fn pi_rotation_about_y_commutes_with_dipolar() {
        for n in 2..=6 {
            let ops = CollectiveOperators::new(n).unwrap();
            let r = hermitian_function(&ops.iy, |l| Complex64::from_polar(1.0, std::f64::consts::PI * l)).unwrap();
            assert!(comm(&r, &ops.h_dz()).camax() < 1e-12);
            assert!((&r * r.adjoint() - CMatrix::identity(ops.dim(), ops.dim())).camax() < 1e-12);
        }
    }

    #[test]
    fn coupled_basis_reproduces_chain_elements() {
        for n in 1..=4 {
            let ops = CollectiveOperators::new(n).unwrap();
            let basis = coupled_basis(&ops).unwrap();
            let h = ops.h_mq();
            let sectors = enumerate_sectors(SpinCount::new(n).unwrap());
            let total: usize = basis.iter().map(|c| c.states.len()).sum();
            assert_eq!(total, 1 << n);
            for mult in &basis {
                let sector = sectors.iter().find(|s| s.s.twice() == mult.twice_s).unwrap();
                for chain in build_chains(sector) {
                    for (i, w) in chain.m_values.windows(2).enumerate() {
                        let lo = ((mult.twice_s - w[0].twice()) / 2) as usize;
                        let hi = ((mult.twice_s - w[1].twice()) / 2) as usize;
                        let elem = (mult.states[hi].adjoint() * &h * &mult.states[lo])[(0, 0)];
                        assert!((elem.re - chain.h_mq_offdiag[i]).abs() < 1e-12, "N={n}");
                        assert!(elem.im.abs() < 1e-12);
                    }
                }
                // no coupling to other multiplets
                for other in &basis {
                    if std::ptr::eq(other, mult) {
                        continue;
                    }
                    for a in &mult.states {
                        for b in &other.states {
                            assert!((a.adjoint() * &h * b)[(0, 0)].norm() < 1e-12);
                        }
                    }
                }
            }
        }
    }
}
