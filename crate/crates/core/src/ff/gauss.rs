//! Characters of `F_q` and the Gauss-sum table `g(m) = Σ_{x≠0} ω(x)^m Θ(x)`.
//!
//! `ω` sends the fixed generator to `e^{2πi/(q-1)}` and `Θ(x) = e^{2πi tr(x)/p}`.

use super::FieldTable;
use crate::error::{Error, Result};
use alloc::vec::Vec;
use core::f64::consts::TAU;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

/// Fields with `q - 1` at most this size use direct summation.
pub const DIRECT_GAUSS_LIMIT: u64 = 1 << 10;

#[inline]
fn root_of_unity(k: u64, n: u64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * (k % n) as f64 / n as f64)
}

/// `Θ(x) = e^{2πi tr(x)/p}`.
pub fn additive_character(x: u32, f: &FieldTable) -> Complex64 {
    root_of_unity(f.trace(x) as u64, f.p())
}

/// `ω(x)^m = e^{2πi m log(x)/(q-1)}`.
pub fn mult_character_power(x: u32, m: i64, f: &FieldTable) -> Result<Complex64> {
    let n = f.q_times();
    let l = f.log(x)? as i128;
    Ok(root_of_unity((l * m as i128).rem_euclid(n as i128) as u64, n))
}

/// Gauss sums `g(0), ..., g(q-2)` for one realised field.
#[derive(Debug, Clone)]
pub struct GaussSumTable {
    values: Vec<Complex64>,
}

impl GaussSumTable {
    /// Chooses direct summation for small fields and an FFT otherwise (with `std`).
    pub fn new(f: &FieldTable) -> Result<Self> {
        #[cfg(feature = "std")]
        {
            if f.q_times() > DIRECT_GAUSS_LIMIT {
                return Ok(Self::by_fft(f));
            }
        }
        Self::direct(f)
    }

    /// `O(q^2)` summation straight from the definition.
    pub fn direct(f: &FieldTable) -> Result<Self> {
        let n = f.q_times();
        if n > 1 << 20 {
            return Err(Error::FieldCap { size: f.q() as u128, cap: 1 << 20 });
        }
        let twiddle: Vec<Complex64> = (0..n).map(|k| root_of_unity(k, n)).collect();
        let theta = theta_sequence(f);
        let values = (0..n)
            .map(|m| {
                let mut acc = Complex64::new(0.0, 0.0);
                let mut idx = 0u64;
                for t in &theta {
                    acc += twiddle[idx as usize] * t;
                    idx += m;
                    if idx >= n {
                        idx -= n;
                    }
                }
                acc
            })
            .collect();
        Ok(Self { values })
    }

    /// `g(m)` is the unnormalised inverse DFT of `j ↦ Θ(generator^j)` over `Z/(q-1)`.
    #[cfg(feature = "std")]
    pub fn by_fft(f: &FieldTable) -> Self {
        let mut buf = theta_sequence(f);
        let mut planner = rustfft::FftPlanner::<f64>::new();
        let fft = planner.plan_fft_inverse(buf.len());
        fft.process(&mut buf);
        Self { values: buf }
    }

    #[inline]
    pub fn g(&self, m: i64) -> Complex64 {
        let n = self.values.len() as i64;
        self.values[m.rem_euclid(n) as usize]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn theta_sequence(f: &FieldTable) -> Vec<Complex64> {
    let p = f.p();
    let chars: Vec<Complex64> = (0..p).map(|k| root_of_unity(k, p)).collect();
    f.exp_table().iter().map(|&x| chars[f.trace(x) as usize]).collect()
}
