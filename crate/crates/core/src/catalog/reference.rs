//! Filter ratings and particle sizes used for reference lookups.

use serde::Serialize;

use crate::error::{Error, Result};

/// A HEPA/ULPA class. Paired labels (E10/H10) are aliases of one class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HepaClass {
    pub labels: &'static [&'static str],
    pub efficiency: f64,
}

/// Classes in ascending order of capture efficiency.
pub const HEPA_CLASSES: [HepaClass; 8] = [
    HepaClass { labels: &["E10", "H10"], efficiency: 0.85 },
    HepaClass { labels: &["E11", "H11"], efficiency: 0.95 },
    HepaClass { labels: &["E12", "H12"], efficiency: 0.995 },
    HepaClass { labels: &["H13"], efficiency: 0.9997 },
    HepaClass { labels: &["H14"], efficiency: 0.99975 },
    HepaClass { labels: &["U15"], efficiency: 0.999975 },
    HepaClass { labels: &["U16"], efficiency: 0.9999975 },
    HepaClass { labels: &["U17"], efficiency: 0.999999 },
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MervRecord {
    pub rating: u8,
    pub dust_efficiency: &'static str,
    pub particle_size: &'static str,
    /// Lower end of the dust efficiency band; 0 for the "< 20%" ratings.
    pub efficiency_lower_bound: f64,
}

const fn merv(
    rating: u8,
    dust_efficiency: &'static str,
    particle_size: &'static str,
    efficiency_lower_bound: f64,
) -> MervRecord {
    MervRecord {
        rating,
        dust_efficiency,
        particle_size,
        efficiency_lower_bound,
    }
}

/// MERV 1 through 20, indexed by `rating - 1`.
pub const MERV_RATINGS: [MervRecord; 20] = [
    merv(1, "< 20%", "≥ 10 microns", 0.0),
    merv(2, "< 20%", "≥ 10 microns", 0.0),
    merv(3, "< 20%", "≥ 10 microns", 0.0),
    merv(4, "< 20%", "≥ 10 microns", 0.0),
    merv(5, "< 20%", "3 – 10 microns", 0.0),
    merv(6, "< 20%", "3 – 10 microns", 0.0),
    merv(7, "25 – 30%", "3 – 10 microns", 0.25),
    merv(8, "30 – 35%", "3 – 10 microns", 0.30),
    merv(9, "40 – 45%", "1 – 3 microns", 0.40),
    merv(10, "50 – 55%", "1 – 3 microns", 0.50),
    merv(11, "60 – 65%", "1 – 3 microns", 0.60),
    merv(12, "70 – 75%", "1 – 3 microns", 0.70),
    merv(13, "89 – 90%", "0.3 – 1 micron", 0.89),
    merv(14, "90 – 95%", "0.3 – 1 micron", 0.90),
    merv(15, "≥ 95%", "0.3 – 1 micron", 0.95),
    merv(16, "≥ 99.95%", "0.3 – 1 micron", 0.9995),
    merv(17, "≥ 99.97%", "0.3 microns", 0.9997),
    merv(18, "≥ 99.97%", "0.1 – 0.2 microns", 0.9997),
    merv(19, "≥ 99.99%", "0.1 – 0.2 microns", 0.9999),
    merv(20, "≥ 99.999%", "0.1 – 0.2 microns", 0.99999),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pollutant {
    pub name: &'static str,
    pub min_microns: f64,
    pub max_microns: f64,
}

const fn pollutant(name: &'static str, min_microns: f64, max_microns: f64) -> Pollutant {
    Pollutant {
        name,
        min_microns,
        max_microns,
    }
}

pub const POLLUTANTS: [Pollutant; 21] = [
    pollutant("Atmospheric Dust", 0.001, 40.0),
    pollutant("Bacteria", 0.3, 60.0),
    pollutant("Beach Sand", 100.0, 10000.0),
    pollutant("Burning Wood", 0.2, 3.0),
    pollutant("Cement Dust", 3.0, 100.0),
    pollutant("Clay, fine", 0.5, 1.0),
    pollutant("Coal Dust", 1.0, 100.0),
    pollutant("Combustion", 0.01, 0.1),
    pollutant("Dust Mites", 100.0, 300.0),
    pollutant("Fly Ash", 1.0, 1000.0),
    pollutant("Grain Dusts", 5.0, 1000.0),
    pollutant("Household dust", 0.05, 100.0),
    pollutant("Human Hair", 40.0, 300.0),
    pollutant("Insecticide Dusts", 0.5, 10.0),
    pollutant("Lead Dust", 0.1, 0.7),
    pollutant("Mold Spores", 10.0, 30.0),
    pollutant("Pet Dander", 0.5, 100.0),
    pollutant("Pollen", 10.0, 1000.0),
    pollutant("Smoke", 0.01, 0.1),
    pollutant("Tobacco Smoke", 0.01, 4.0),
    pollutant("Viruses", 0.005, 0.3),
];

/// All reference tables as one serializable value.
#[derive(Debug, Clone, Serialize)]
pub struct ReferenceTables {
    pub hepa: &'static [HepaClass],
    pub merv: &'static [MervRecord],
    pub pollutants: &'static [Pollutant],
}

impl Default for ReferenceTables {
    fn default() -> Self {
        ReferenceTables {
            hepa: &HEPA_CLASSES,
            merv: &MERV_RATINGS,
            pollutants: &POLLUTANTS,
        }
    }
}

pub fn lookup_hepa_efficiency(class_label: &str) -> Result<f64> {
    let label = class_label.trim();
    HEPA_CLASSES
        .iter()
        .find(|c| c.labels.iter().any(|l| l.eq_ignore_ascii_case(label)))
        .map(|c| c.efficiency)
        .ok_or_else(|| Error::not_found("HEPA class", label))
}

pub fn lookup_merv(rating: u32) -> Result<&'static MervRecord> {
    if !(1..=20).contains(&rating) {
        return Err(Error::domain(format!(
            "MERV rating must be in 1..=20, got {rating}"
        )));
    }
    Ok(&MERV_RATINGS[rating as usize - 1])
}

/// Names of every pollutant whose closed size range contains `size_microns`,
/// in table order.
pub fn classify_particle(size_microns: f64) -> Result<Vec<&'static str>> {
    if !(size_microns > 0.0 && size_microns.is_finite()) {
        return Err(Error::domain(format!(
            "particle size must be > 0 microns, got {size_microns}"
        )));
    }
    Ok(POLLUTANTS
        .iter()
        .filter(|p| p.min_microns <= size_microns && size_microns <= p.max_microns)
        .map(|p| p.name)
        .collect())
}
