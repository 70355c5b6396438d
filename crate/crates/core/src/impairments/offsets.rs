use std::f64::consts::PI;

use num_complex::Complex64;

use crate::signal::SAMPLE_RATE_HZ;

/// Rotates every sample by `phi_rad`.
pub fn apply_phase_offset(x: &[Complex64], phi_rad: f64) -> Vec<Complex64> {
    if phi_rad == 0.0 {
        return x.to_vec();
    }
    let rot = Complex64::from_polar(1.0, phi_rad);
    x.iter().map(|s| s * rot).collect()
}

/// Mixes `x` by a complex exponential at `delta_f_hz` (sample 0 unrotated).
pub fn apply_frequency_offset(x: &[Complex64], delta_f_hz: f64) -> Vec<Complex64> {
    if delta_f_hz == 0.0 {
        return x.to_vec();
    }
    let cycles_per_sample = delta_f_hz / SAMPLE_RATE_HZ;
    x.iter()
        .enumerate()
        .map(|(n, s)| {
            // Reduce the phase in cycles first to keep precision for long inputs.
            let cycles = (cycles_per_sample * n as f64).fract();
            s * Complex64::from_polar(1.0, 2.0 * PI * cycles)
        })
        .collect()
}
