//! Conversions between SI and the lab units used in files and on the command line.
//!
//! Conversions divide or multiply by exactly representable powers of ten, so
//! a value converted out and back differs from the original by at most one ulp.

/// cm²/(V·s) per m²/(V·s).
const CM2_PER_M2: f64 = 1e4;

pub fn mobility_to_cm2(mu_si: f64) -> f64 {
    mu_si * CM2_PER_M2
}

pub fn mobility_from_cm2(mu_cm2: f64) -> f64 {
    mu_cm2 / CM2_PER_M2
}

/// F/cm² to F/m².
pub fn cox_from_per_cm2(c_ox: f64) -> f64 {
    c_ox * CM2_PER_M2
}

pub fn cox_to_per_cm2(c_ox_si: f64) -> f64 {
    c_ox_si / CM2_PER_M2
}

pub fn um_to_m(x: f64) -> f64 {
    x / 1e6
}

pub fn m_to_um(x: f64) -> f64 {
    x * 1e6
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mobility_round_trip_is_within_one_ulp() {
        for mu in [0.0505, 0.0316, 0.0574, 0.0709, 1.0, 3.3e-3] {
            let back = mobility_from_cm2(mobility_to_cm2(mu));
            assert!((back - mu).abs() <= f64::EPSILON * mu, "{mu} -> {back}");
        }
        assert_eq!(mobility_to_cm2(0.05), 500.0);
    }

    #[test]
    fn reference_oxide_capacitance() {
        // 57.8 nF/cm² is 5.78e-4 F/m²
        assert!((cox_from_per_cm2(57.8e-9) - 5.78e-4).abs() < 1e-18);
    }
}
