use super::HardwareError;

fn positive(what: &'static str, value: f64) -> Result<f64, HardwareError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(HardwareError::NonPositive { what, value })
    }
}

/// `T1*T2/(T1+T2)`, in the units of the inputs.
pub fn effective_coherence_time(t1: f64, t2: f64) -> Result<f64, HardwareError> {
    let t1 = positive("T1", t1)?;
    let t2 = positive("T2", t2)?;
    Ok(t1 * t2 / (t1 + t2))
}

/// Van der Waals interaction `C6 / r^6`.
pub fn vdw_interaction(c6: f64, dist_um: f64) -> Result<f64, HardwareError> {
    let r = positive("distance", dist_um)?;
    Ok(c6 / r.powi(6))
}

/// Blockade radius `(C6 / (hbar * Omega))^(1/6)`.
pub fn blockade_radius(c6_over_hbar_omega: f64) -> Result<f64, HardwareError> {
    Ok(positive("C6/(hbar Omega)", c6_over_hbar_omega)?.powf(1.0 / 6.0))
}
