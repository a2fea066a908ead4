//! Total-spin sectors of N spin-1/2 particles and the Hamiltonian blocks in
//! the coupled |S, M⟩ basis.
//!
//! Both the two-quantum Hamiltonian `-(1/4)[(I⁺)² + (I⁻)²]` and the averaged
//! secular dipolar Hamiltonian `(1/2)(3I_z² - I²)` commute with I², so every
//! sector contributes `multiplicity` identical copies of a (2S+1)-dimensional
//! block. The two-quantum term only connects M to M ± 2, which further splits
//! each block into two tridiagonal parity chains. All energies here are in
//! units of the dipolar coupling D.

use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A half-integer quantum number stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const fn from_twice(twice: i32) -> Self {
        Self(twice)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Number of spins in the nanopore.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SpinCount(usize);

impl SpinCount {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroSpins);
        }
        Ok(Self(n))
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn is_odd(self) -> bool {
        self.0 % 2 == 1
    }
}

/// Exact binomial coefficient; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// One total-spin block of the coupled basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinSector {
    pub spins: SpinCount,
    pub s: HalfInt,
    /// Number of independent copies of this S in the 2^N space.
    pub multiplicity: BigUint,
}

impl SpinSector {
    pub fn dimension(&self) -> usize {
        (self.s.twice() + 1) as usize
    }

    /// Multiplicity as a float, for weighting sums; exact up to 2^53 and
    /// correctly rounded beyond.
    pub fn multiplicity_f64(&self) -> f64 {
        self.multiplicity.to_f64().unwrap_or(f64::INFINITY)
    }

    /// S(S+1).
    pub fn casimir(&self) -> f64 {
        let s = self.s.value();
        s * (s + 1.0)
    }
}

/// Sectors S = N/2, N/2 - 1, ... down to 0 or 1/2, in descending order.
pub fn enumerate_sectors(n: SpinCount) -> Vec<SpinSector> {
    let n_spins = n.get();
    (0..=n_spins / 2)
        .map(|k| {
            // S = N/2 - k
            let twice_s = (n_spins - 2 * k) as i32;
            let upper = binomial(n_spins, k);
            let lower = if k == 0 {
                BigUint::zero()
            } else {
                binomial(n_spins, k - 1)
            };
            SpinSector {
                spins: n,
                s: HalfInt::from_twice(twice_s),
                multiplicity: upper - lower,
            }
        })
        .collect()
}

/// ⟨S, M+2| (I⁺)² |S, M⟩ for `-S <= M <= S - 2`.
pub fn ladder_squared_element(s: HalfInt, m: HalfInt) -> Result<f64> {
    let (ts, tm) = (s.twice(), m.twice());
    if (ts - tm) % 2 != 0 || tm < -ts || tm > ts - 4 {
        return Err(Error::MagneticOutOfRange {
            s: s.value(),
            m: m.value(),
        });
    }
    let (sv, mv) = (s.value(), m.value());
    let c = sv * (sv + 1.0);
    let first = c - mv * (mv + 1.0);
    let second = c - (mv + 1.0) * (mv + 2.0);
    Ok((first * second).sqrt())
}

/// The block of one residue class of M (mod 2) inside a sector.
#[derive(Clone, Debug, PartialEq)]
pub struct ParityChain {
    pub s: HalfInt,
    /// Ascending magnetic quantum numbers, stepping by 2.
    pub m_values: Vec<HalfInt>,
    /// Superdiagonal of the two-quantum Hamiltonian in units of D; entry `i`
    /// couples `m_values[i]` and `m_values[i + 1]`. The diagonal is zero.
    pub h_mq_offdiag: Vec<f64>,
    /// Diagonal of the averaged dipolar Hamiltonian in units of D.
    pub h_dz_diag: Vec<f64>,
}

impl ParityChain {
    pub fn len(&self) -> usize {
        self.m_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m_values.is_empty()
    }

    /// Dense symmetric form of the two-quantum Hamiltonian block.
    pub fn h_mq_dense(&self) -> nalgebra::DMatrix<f64> {
        let d = self.len();
        let mut h = nalgebra::DMatrix::zeros(d, d);
        for (i, &v) in self.h_mq_offdiag.iter().enumerate() {
            h[(i, i + 1)] = v;
            h[(i + 1, i)] = v;
        }
        h
    }
}

/// (1/2)(3M² - S(S+1)), the dipolar energy of |S, M⟩ in units of D.
pub fn dipolar_energy(s: HalfInt, m: HalfInt) -> f64 {
    let sv = s.value();
    let mv = m.value();
    0.5 * (3.0 * mv * mv - sv * (sv + 1.0))
}

fn chain_from(s: HalfInt, first_twice_m: i32) -> ParityChain {
    let m_values: Vec<HalfInt> = (first_twice_m..=s.twice())
        .step_by(4)
        .map(HalfInt::from_twice)
        .collect();
    let h_mq_offdiag = m_values
        .windows(2)
        .map(|w| -0.25 * ladder_squared_element(s, w[0]).expect("chain neighbours are admissible"))
        .collect();
    let h_dz_diag = m_values.iter().map(|&m| dipolar_energy(s, m)).collect();
    ParityChain {
        s,
        m_values,
        h_mq_offdiag,
        h_dz_diag,
    }
}

/// The two parity chains of a sector: the one starting at M = -S and the one
/// starting at M = -S + 1 (empty only for S = 0).
pub fn build_chains(sector: &SpinSector) -> [ParityChain; 2] {
    let ts = sector.s.twice();
    [chain_from(sector.s, -ts), chain_from(sector.s, -ts + 2)]
}
