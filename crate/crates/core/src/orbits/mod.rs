//! Orbital reductions: J2 nodal drift, pairwise RAAN-alignment epochs, and
//! Hohmann-style transfer/disposal budgets, assembled into a
//! [`ProblemInstance`].

mod tle;

pub use tle::{parse_catalog, parse_tle, CatalogParse, TleError};

use crate::instance::{InstanceError, ProblemInstance};
use std::f64::consts::{PI, TAU};
use thiserror::Error;

const SECONDS_PER_DAY: f64 = 86400.0;

/// Relative tolerance below which two nodal drift rates count as equal.
const RATE_TOL: f64 = 1e-9;
/// Angular tolerance (rad) below which two RAANs count as aligned.
const ANGLE_TOL: f64 = 1e-9;

/// Earth model used throughout the reductions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Gravitational parameter, m³/s².
    pub mu: f64,
    /// Equatorial radius, m.
    pub r_e: f64,
    /// Second zonal harmonic. Stored negative; see [`raan_rate`] for the
    /// sign convention this implies.
    pub j2: f64,
    /// Perigee radius of the disposal orbit, m.
    pub r_p: f64,
}

impl PhysicalConstants {
    pub const EARTH: PhysicalConstants = PhysicalConstants {
        mu: 3.986004418e14,
        r_e: 6.378e6,
        j2: -0.1082635854e-2,
        r_p: 1.02 * 6.378e6,
    };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants::EARTH
    }
}

/// Instantaneous Keplerian elements at an epoch.
///
/// Angles are radians; `epoch` counts days since 1949-12-31 00:00 UTC, the
/// origin from which TLE epochs are measured here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OsculatingElements {
    /// Semimajor axis, m.
    pub a: f64,
    /// Eccentricity.
    pub e: f64,
    /// Inclination, rad.
    pub i: f64,
    /// Right ascension of the ascending node, rad, in `[0, 2π)`.
    pub raan: f64,
    /// Argument of periapsis, rad, in `[0, 2π)`.
    pub argp: f64,
    /// Mean anomaly, rad, in `[0, 2π)`.
    pub mean_anomaly: f64,
    /// Epoch, days since the 1949-12-31 00:00 UTC origin.
    pub epoch: f64,
}

/// One catalog entry: identity plus elements at the record's epoch.
#[derive(Debug, Clone, PartialEq)]
pub struct DebrisObject {
    /// Catalog number.
    pub id: u32,
    /// Designation, e.g. `1982-092RP`, or the record's name line.
    pub name: String,
    pub elements: OsculatingElements,
}

#[derive(Debug, Error)]
pub enum OrbitsError {
    #[error("propagation time {t} days is before the element epoch {epoch}")]
    TimeBeforeEpoch { t: f64, epoch: f64 },
    #[error(
        "semimajor axis {a:.0} m is below the disposal perigee radius {r_p:.0} m; \
         the object is already decaying and needs no disposal burn"
    )]
    BelowDisposalPerigee { a: f64, r_p: f64 },
    #[error("catalog contains no objects")]
    EmptyCatalog,
    #[error("{name}: {source}")]
    Object {
        name: String,
        #[source]
        source: Box<OrbitsError>,
    },
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// Secular RAAN drift rate in rad/day under the J2 perturbation:
/// `Ω̇ = −(3/2)(r_E/p)² n J2 cos i` with `n = sqrt(mu/a³)`, `p = a(1−e²)`.
///
/// The formula is applied literally with the stored negative J2, so prograde
/// orbits come out with positive Ω̇ under this sign convention.
pub fn raan_rate(elements: &OsculatingElements, constants: &PhysicalConstants) -> f64 {
    let n = (constants.mu / elements.a.powi(3)).sqrt();
    let p = elements.a * (1.0 - elements.e * elements.e);
    let rate = -1.5 * (constants.r_e / p).powi(2) * n * constants.j2 * elements.i.cos();
    rate * SECONDS_PER_DAY
}

/// RAAN at absolute time `t` (days), linearly propagated from the epoch and
/// normalized to `[0, 2π)`. `t` must not precede the epoch.
pub fn raan_at(elements: &OsculatingElements, rate: f64, t: f64) -> Result<f64, OrbitsError> {
    if t < elements.epoch {
        return Err(OrbitsError::TimeBeforeEpoch {
            t,
            epoch: elements.epoch,
        });
    }
    Ok((elements.raan + rate * (t - elements.epoch)).rem_euclid(TAU))
}

/// First time (days, from the instant the `omega` values refer to) at which
/// two drifting node lines coincide:
/// `T = (Ω_j − Ω_k + 2πK) / (Ω̇_k − Ω̇_j)`, with `K ∈ {−1, 0, 1}` picked per
/// the sign pattern of the numerator difference and the denominator so the
/// first nonnegative crossing is selected. Symmetric in `(j, k)`.
///
/// When the drift rates are equal within tolerance the pair either stays
/// aligned for good (returns 0) or never aligns; the latter is reported as
/// the sentinel `t_max + 1`, an epoch guaranteed to sit past the deadline.
pub fn alignment_time(omega_j: f64, omega_k: f64, rate_j: f64, rate_k: f64, t_max: f64) -> f64 {
    let d = rate_k - rate_j;
    let scale = rate_j.abs().max(rate_k.abs());
    if d.abs() <= RATE_TOL * scale {
        let gap = (omega_j - omega_k + PI).rem_euclid(TAU) - PI;
        return if gap.abs() <= ANGLE_TOL {
            0.0
        } else {
            t_max + 1.0
        };
    }
    let delta = omega_j.rem_euclid(TAU) - omega_k.rem_euclid(TAU);
    let k = match (delta >= 0.0, d >= 0.0) {
        (true, true) | (false, false) => 0.0,
        (true, false) => -1.0,
        (false, true) => 1.0,
    };
    let mut t = (delta + k * TAU) / d;
    if t < 0.0 {
        // Floating-point edge: the case split guarantees t >= 0 in exact
        // arithmetic, so a negative result can only be roundoff. Advance by
        // one synodic period to stay on "first alignment after now".
        t += TAU / d.abs();
    }
    t
}

/// Impulsive cost (m/s) of transferring between two nearly-circular orbits:
/// `½ V_j sqrt((Δa/a_j)² + Δe² + Δi²)` with `V_j = sqrt(mu/a_j)` evaluated on
/// the lower orbit, so the result is symmetric in its arguments.
pub fn transfer_cost(
    elem_j: &OsculatingElements,
    elem_k: &OsculatingElements,
    constants: &PhysicalConstants,
) -> f64 {
    let (lo, hi) = if elem_j.a <= elem_k.a {
        (elem_j, elem_k)
    } else {
        (elem_k, elem_j)
    };
    let v = (constants.mu / lo.a).sqrt();
    let da = (hi.a - lo.a) / lo.a;
    let de = (hi.e - lo.e).abs();
    let di = (hi.i - lo.i).abs();
    0.5 * v * (da * da + de * de + di * di).sqrt()
}

/// Cost (m/s) of the burn lowering perigee to the disposal radius:
/// `sqrt(mu/r_p) − sqrt(mu/a_j)`. Objects already below the disposal
/// perigee are rejected rather than credited with a negative burn.
pub fn disposal_cost(
    elem: &OsculatingElements,
    constants: &PhysicalConstants,
) -> Result<f64, OrbitsError> {
    if elem.a < constants.r_p {
        return Err(OrbitsError::BelowDisposalPerigee {
            a: elem.a,
            r_p: constants.r_p,
        });
    }
    Ok((constants.mu / constants.r_p).sqrt() - (constants.mu / elem.a).sqrt())
}

/// Reduces a catalog to a [`ProblemInstance`]: every RAAN is propagated to
/// the reference time `t0`, pairwise alignment epochs are measured from
/// `t0`, and the cost tables are filled from the transfer and disposal
/// budgets. Labels carry over from the objects' names.
pub fn build_instance(
    catalog: &[DebrisObject],
    t0: f64,
    n_s: usize,
    t_max: f64,
    t_s: f64,
    constants: &PhysicalConstants,
) -> Result<ProblemInstance, OrbitsError> {
    if catalog.is_empty() {
        return Err(OrbitsError::EmptyCatalog);
    }
    let with_name = |name: &str| {
        let name = name.to_owned();
        move |source: OrbitsError| OrbitsError::Object {
            name,
            source: Box::new(source),
        }
    };
    let n_t = catalog.len();
    let mut rates = Vec::with_capacity(n_t);
    let mut omegas = Vec::with_capacity(n_t);
    for obj in catalog {
        let rate = raan_rate(&obj.elements, constants);
        let omega = raan_at(&obj.elements, rate, t0).map_err(with_name(&obj.name))?;
        rates.push(rate);
        omegas.push(omega);
    }
    let mut t = vec![vec![0.0; n_t]; n_t];
    let mut c = vec![vec![0.0; n_t]; n_t];
    for i in 0..n_t {
        for j in (i + 1)..n_t {
            let epoch = alignment_time(omegas[i], omegas[j], rates[i], rates[j], t_max);
            t[i][j] = epoch;
            t[j][i] = epoch;
            let cost = transfer_cost(&catalog[i].elements, &catalog[j].elements, constants);
            c[i][j] = cost;
            c[j][i] = cost;
        }
    }
    let mut disposal = Vec::with_capacity(n_t);
    for obj in catalog {
        disposal.push(disposal_cost(&obj.elements, constants).map_err(with_name(&obj.name))?);
    }
    let labels = catalog.iter().map(|o| o.name.clone()).collect();
    Ok(ProblemInstance::from_real_tables(
        n_s, t_max, t_s, labels, t, c, disposal,
    )?)
}
