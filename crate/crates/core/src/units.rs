use crate::constants::PPM_DENSITY_CM3;
use crate::error::{Error, Result};

/// Converts a lattice-site fraction in ppm to atoms·cm⁻³.
pub fn ppm_to_density(ppm: f64) -> Result<f64> {
    if !(ppm >= 0.0) {
        return Err(Error::domain(format!(
            "concentration must be non-negative, got {ppm} ppm"
        )));
    }
    Ok(ppm * PPM_DENSITY_CM3)
}

pub fn density_to_ppm(density_cm3: f64) -> Result<f64> {
    if !(density_cm3 >= 0.0) {
        return Err(Error::domain(format!(
            "density must be non-negative, got {density_cm3} cm^-3"
        )));
    }
    Ok(density_cm3 / PPM_DENSITY_CM3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn anchors() {
        assert_eq!(ppm_to_density(1.0).unwrap(), 1.75e17);
        assert_eq!(ppm_to_density(0.0).unwrap(), 0.0);
        assert!((ppm_to_density(200.0).unwrap() - 3.5e19).abs() < 1e4);
        assert!(ppm_to_density(-1.0).is_err());
        assert!(density_to_ppm(-1.0).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(ppm in 0.0f64..1e6) {
            let back = density_to_ppm(ppm_to_density(ppm).unwrap()).unwrap();
            prop_assert!((back - ppm).abs() <= 1e-12 * ppm.max(f64::MIN_POSITIVE));
        }
    }
}
