use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fieldmaps::{confinement_ratio, decay_profile, fit_decay_rate, DecayProfile};
use crate::geometry::{build_helix, build_meander, HelixSpec, MeanderSpec};
use crate::link::LinkResult;
use crate::magnetics::Conductor;
use crate::scenario::LinkScenario;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaterialRow {
    pub conductor: Conductor,
    pub result: LinkResult,
}

/// Evaluates the flat link once per conductor, both coils sharing it.
pub fn material_compare(base: &LinkScenario, conductors: &[Conductor]) -> Result<Vec<MaterialRow>> {
    if conductors.len() < 2 {
        return Err(Error::param("conductors", "need at least two conductors to compare"));
    }
    let rows: Vec<Result<MaterialRow>> = conductors
        .par_iter()
        .map(|c| {
            c.validate()?;
            Ok(MaterialRow {
                conductor: c.clone(),
                result: base.with_conductor(c).evaluate_flat()?,
            })
        })
        .collect();
    rows.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfinementComparison {
    pub meander_footprint: f64,
    pub helix_footprint: f64,
    pub shallow: f64,
    pub deep: f64,
    /// Depth interval used for both exponential fits.
    pub window: (f64, f64),
    pub meander_profile: DecayProfile,
    pub helix_profile: DecayProfile,
    pub meander_rate: f64,
    pub helix_rate: f64,
    pub meander_ratio: f64,
    pub helix_ratio: f64,
    /// helix_ratio / meander_ratio; above 1 means the meander keeps its
    /// field closer to the surface.
    pub ratio_of_ratios: f64,
}

/// Profiles both coils at 1 A along their normals. The fits span the full
/// depth range.
pub fn confinement_compare(
    meander: &MeanderSpec,
    helix: &HelixSpec,
    depths: &[f64],
    shallow: f64,
    deep: f64,
) -> Result<ConfinementComparison> {
    let m_path = build_meander(meander)?;
    let h_path = build_helix(helix)?;
    let dm = m_path.footprint_diameter(m_path.plane_normal());
    let dh = h_path.footprint_diameter(h_path.plane_normal());
    if (dm - dh).abs() > 0.1 * dm.max(dh) {
        return Err(Error::Configuration(format!(
            "footprints differ by more than 10%: meander {dm:.4} m, helix {dh:.4} m"
        )));
    }
    let m_prof = decay_profile(&m_path, 1.0, depths)?;
    let h_prof = decay_profile(&h_path, 1.0, depths)?;
    let window = (m_prof.depths[0], *m_prof.depths.last().expect("non-empty"));
    let meander_rate = fit_decay_rate(&m_prof, window)?;
    let helix_rate = fit_decay_rate(&h_prof, window)?;
    let meander_ratio = confinement_ratio(&m_prof, shallow, deep)?;
    let helix_ratio = confinement_ratio(&h_prof, shallow, deep)?;
    Ok(ConfinementComparison {
        meander_footprint: dm,
        helix_footprint: dh,
        shallow,
        deep,
        window,
        meander_profile: m_prof,
        helix_profile: h_prof,
        meander_rate,
        helix_rate,
        meander_ratio,
        helix_ratio,
        ratio_of_ratios: helix_ratio / meander_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{matching_helix, reference_link, reference_meander};
    use crate::vec3::Vec3;

    fn depths() -> Vec<f64> {
        (1..=20).map(|i| i as f64 * 0.01).collect()
    }

    #[test]
    fn meander_beats_helix() {
        let m = reference_meander();
        let h = matching_helix(&m).unwrap();
        let c = confinement_compare(&m, &h, &depths(), 0.01, 0.1).unwrap();
        assert!(c.meander_rate > c.helix_rate);
        assert!(c.ratio_of_ratios >= 5.0, "{}", c.ratio_of_ratios);
    }

    #[test]
    fn depth_order_is_irrelevant() {
        let m = reference_meander();
        let h = matching_helix(&m).unwrap();
        let mut rev = depths();
        rev.reverse();
        let a = confinement_compare(&m, &h, &depths(), 0.01, 0.1).unwrap();
        let b = confinement_compare(&m, &h, &rev, 0.01, 0.1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mismatched_footprints_rejected() {
        let m = reference_meander();
        let mut h = matching_helix(&m).unwrap();
        h.radius *= 0.5;
        h.axis = Vec3::Z;
        assert!(matches!(
            confinement_compare(&m, &h, &depths(), 0.01, 0.1),
            Err(Error::Configuration(_))
        ));
    }

    #[test]
    fn material_compare_needs_two() {
        let s = reference_link(Conductor::copper());
        assert!(material_compare(&s, &[Conductor::copper()]).is_err());
    }
}
