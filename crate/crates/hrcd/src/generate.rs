//! Seeded synthetic instance generator.
//!
//! Geometry mimics a petro-industrial district: most sites string along
//! pipeline corridors, the rest cluster around a handful of high-value
//! anchors (refineries, terminals) that are tier-1 by construction.
//!
//! Determinism: all randomness comes from a ChaCha8 stream seeded with
//! `GeneratorParams::seed` via `seed_from_u64`, so identical parameters
//! produce bit-identical instances on every platform.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::instance::{
    CandidateLocation, Coords, DemandSite, Instance, InstanceMeta, Level, LevelSpec, Money,
    PerResource, ScenarioConfig, Tier,
};

/// Mean Earth radius used for all geodesic math.
pub const EARTH_RADIUS_KM: f64 = 6371.0;

const HUMAN_UNIT_COST: f64 = 3000.0;
const ROBOT_UNIT_COST: f64 = 1200.0;
/// Per-candidate unit costs are jittered uniformly in this band around the
/// base costs; location-dependent labor and logistics keep candidates from
/// being cost-identical.
const UNIT_COST_JITTER: (f64, f64) = (0.92, 1.08);
const BASE_FIXED_COST_RANGE: (f64, f64) = (60_000.0, 100_000.0);
const CORRIDOR_JITTER_KM: f64 = 1.0;
const CLUSTER_SPREAD_KM: f64 = 2.0;
const CORRIDOR_SHARE: f64 = 0.6;
const MAX_PLACEMENT_TRIES: usize = 64;

/// Great-circle distance in km between two lat/lon points (haversine on a
/// sphere of radius [`EARTH_RADIUS_KM`]).
pub fn geodesic_km(a: Coords, b: Coords) -> f64 {
    let lat_a = a.lat.to_radians();
    let lat_b = b.lat.to_radians();
    let d_lat = (b.lat - a.lat).to_radians();
    let d_lon = (b.lon - a.lon).to_radians();
    let h = (d_lat / 2.0).sin().powi(2)
        + lat_a.cos() * lat_b.cos() * (d_lon / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_KM * h.sqrt().min(1.0).asin()
}

/// Default level table: a premium high-capacity tier, a standard tier, and
/// a satellite-outpost tier. Speeds are set so a high-level facility covers
/// a 15 km radius within the 5-minute tier-1 SLA.
pub fn default_level_specs() -> Vec<LevelSpec> {
    vec![
        LevelSpec {
            level: Level::High,
            fixed_cost_multiplier: 1.5,
            max_cap: PerResource::new(240, 120),
            min_cap: PerResource::new(4, 2),
            response_speed: 3.0,
        },
        LevelSpec {
            level: Level::Medium,
            fixed_cost_multiplier: 1.0,
            max_cap: PerResource::new(120, 60),
            min_cap: PerResource::new(2, 1),
            response_speed: 2.0,
        },
        LevelSpec {
            level: Level::Low,
            fixed_cost_multiplier: 0.6,
            max_cap: PerResource::new(60, 30),
            min_cap: PerResource::new(1, 1),
            response_speed: 1.2,
        },
    ]
}

/// Everything the generator needs to build an instance.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorParams {
    pub seed: u64,
    pub n_candidates: usize,
    pub n_sites: usize,
    pub region_center: Coords,
    pub region_radius_km: f64,
    /// Probabilities of tier 1/2/3 for generated sites; must sum to 1.
    pub tier_mix: [f64; 3],
    pub scenario: ScenarioConfig,
}

impl GeneratorParams {
    /// Defaults: Dhahran-area region, 25 km radius, 10/25/65 tier mix.
    pub fn new(seed: u64, n_candidates: usize, n_sites: usize, scenario: ScenarioConfig) -> Self {
        GeneratorParams {
            seed,
            n_candidates,
            n_sites,
            region_center: Coords::new(26.30, 50.15),
            region_radius_km: 25.0,
            tier_mix: [0.10, 0.25, 0.65],
            scenario,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.n_candidates == 0 {
            return Err("n_candidates must be at least 1".into());
        }
        if self.n_sites == 0 {
            return Err("n_sites must be at least 1".into());
        }
        let sum: f64 = self.tier_mix.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(format!("tier_mix must sum to 1, got {sum}"));
        }
        if self.tier_mix.iter().any(|&p| p < 0.0) {
            return Err("tier_mix probabilities must be non-negative".into());
        }
        if self.region_radius_km <= 0.0 {
            return Err("region_radius_km must be positive".into());
        }
        Ok(())
    }
}

/// Offsets `center` by `(east_km, north_km)` using the local flat-earth
/// approximation, good to well under corridor-jitter scale at district size.
fn offset_km(center: Coords, east_km: f64, north_km: f64) -> Coords {
    let deg_per_km_lat = 360.0 / (2.0 * std::f64::consts::PI * EARTH_RADIUS_KM);
    let deg_per_km_lon = deg_per_km_lat / center.lat.to_radians().cos();
    Coords::new(
        center.lat + north_km * deg_per_km_lat,
        center.lon + east_km * deg_per_km_lon,
    )
}

fn uniform_in_disk(rng: &mut ChaCha8Rng, center: Coords, radius_km: f64) -> Coords {
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = radius_km * rng.gen_range(0.0f64..1.0).sqrt();
    offset_km(center, r * theta.cos(), r * theta.sin())
}

fn clamp(value: f64, lo: f64, hi: f64) -> f64 {
    value.max(lo).min(hi)
}

/// How many tier-1 anchor assets a region of `n_sites` carries. Real
/// districts hold a small fixed set of refineries and terminals, so the
/// count saturates instead of scaling with sample size.
fn anchor_count(n_sites: usize, tier1_prob: f64) -> usize {
    if tier1_prob <= 0.0 {
        return 0;
    }
    let raw = (n_sites as f64 / 7.0).ceil() as usize;
    raw.clamp(2, 8).min(n_sites)
}

/// Builds an instance from `params`. Pure function of its input: the same
/// parameters always produce the same instance, byte for byte once
/// serialized. Panics if `params.validate()` fails.
pub fn generate_instance(params: &GeneratorParams) -> Instance {
    if let Err(msg) = params.validate() {
        panic!("invalid generator params: {msg}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let scenario = params.scenario.clone();
    let levels = default_level_specs();
    let max_speed = levels
        .iter()
        .map(|l| l.response_speed)
        .fold(f64::MIN, f64::max);

    // Candidates: scattered over the region, with location-dependent costs.
    // Scenario choices must not perturb the stream, so the robot multiplier
    // is applied after drawing.
    let mut candidates = Vec::with_capacity(params.n_candidates);
    for id in 0..params.n_candidates {
        let coords = uniform_in_disk(&mut rng, params.region_center, params.region_radius_km);
        let base = rng.gen_range(BASE_FIXED_COST_RANGE.0..=BASE_FIXED_COST_RANGE.1);
        let base_fixed_cost = ((base / 100.0).round() * 100.0) as Money;
        let robot_jitter = rng.gen_range(UNIT_COST_JITTER.0..=UNIT_COST_JITTER.1);
        let human_jitter = rng.gen_range(UNIT_COST_JITTER.0..=UNIT_COST_JITTER.1);
        let robot_cost =
            (ROBOT_UNIT_COST * robot_jitter * scenario.robot_cost_multiplier).round() as Money;
        let human_cost = (HUMAN_UNIT_COST * human_jitter).round() as Money;
        candidates.push(CandidateLocation {
            id,
            coords,
            base_fixed_cost,
            unit_cost: PerResource::new(robot_cost, human_cost),
        });
    }

    // Corridors: 2-4 jittered polylines crossing the region.
    let n_corridors = rng.gen_range(2..=4usize);
    let mut corridors = Vec::with_capacity(n_corridors);
    for _ in 0..n_corridors {
        let a = uniform_in_disk(&mut rng, params.region_center, params.region_radius_km);
        let bend = uniform_in_disk(&mut rng, params.region_center, params.region_radius_km);
        let b = uniform_in_disk(&mut rng, params.region_center, params.region_radius_km);
        corridors.push([a, bend, b]);
    }

    let n_anchors = anchor_count(params.n_sites, params.tier_mix[0]);
    let non_anchor = params.n_sites - n_anchors;
    // Residual tier probabilities for non-anchor sites, rebalanced so the
    // expected overall frequencies track tier_mix.
    let residual = {
        let t1 = (params.tier_mix[0] * params.n_sites as f64 - n_anchors as f64).max(0.0);
        let t2 = params.tier_mix[1] * params.n_sites as f64;
        let t3 = params.tier_mix[2] * params.n_sites as f64;
        let total = t1 + t2 + t3;
        if total > 0.0 {
            [t1 / total, t2 / total, t3 / total]
        } else {
            [0.0, 0.0, 1.0]
        }
    };
    let p_corridor = if non_anchor > 0 {
        (CORRIDOR_SHARE * params.n_sites as f64 / non_anchor as f64).min(1.0)
    } else {
        0.0
    };

    let corridor_jitter = Normal::new(0.0, CORRIDOR_JITTER_KM).unwrap();
    let cluster_spread = Normal::new(0.0, CLUSTER_SPREAD_KM).unwrap();

    let mut anchor_positions: Vec<Coords> = Vec::with_capacity(n_anchors);
    let mut sites = Vec::with_capacity(params.n_sites);
    for id in 0..params.n_sites {
        let is_anchor = id < n_anchors;
        let tier = if is_anchor {
            Tier::Tier1
        } else {
            let u: f64 = rng.gen_range(0.0..1.0);
            if u < residual[0] {
                Tier::Tier1
            } else if u < residual[0] + residual[1] {
                Tier::Tier2
            } else {
                Tier::Tier3
            }
        };
        let sla_minutes = tier.default_sla_minutes();
        let reach_km = sla_minutes * max_speed;

        // Draw positions until some candidate can reach the site within its
        // SLA at the fastest level; fall back to a spot near a candidate.
        let mut coords = params.region_center;
        let mut placed = false;
        for _ in 0..MAX_PLACEMENT_TRIES {
            coords = if is_anchor {
                uniform_in_disk(&mut rng, params.region_center, params.region_radius_km)
            } else if !anchor_positions.is_empty() && rng.gen_range(0.0..1.0f64) >= p_corridor {
                let anchor = anchor_positions[rng.gen_range(0..anchor_positions.len())];
                let east = cluster_spread.sample(&mut rng);
                let north = cluster_spread.sample(&mut rng);
                offset_km(anchor, east, north)
            } else {
                let corridor = &corridors[rng.gen_range(0..corridors.len())];
                let t = rng.gen_range(0.0..1.0f64);
                let base = if t < 0.5 {
                    lerp(corridor[0], corridor[1], t * 2.0)
                } else {
                    lerp(corridor[1], corridor[2], (t - 0.5) * 2.0)
                };
                let east = corridor_jitter.sample(&mut rng);
                let north = corridor_jitter.sample(&mut rng);
                offset_km(base, east, north)
            };
            if candidates
                .iter()
                .any(|c| geodesic_km(c.coords, coords) <= reach_km)
            {
                placed = true;
                break;
            }
        }
        if !placed {
            let cand = &candidates[rng.gen_range(0..candidates.len())];
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = rng.gen_range(0.1..=0.5) * reach_km;
            coords = offset_km(cand.coords, r * theta.cos(), r * theta.sin());
        }
        if is_anchor {
            anchor_positions.push(coords);
        }

        let (d_lo, d_hi) = tier.demand_band();
        let demand_scu = rng.gen_range(d_lo..=d_hi);
        let (m_lo, m_hi) = tier.mix_band();
        let mix_base = if tier == Tier::Tier2 {
            1.0
        } else {
            rng.gen_range(m_lo..=m_hi)
        };
        let mix_ratio = clamp(mix_base * scenario.mix_scaler, m_lo, m_hi);

        sites.push(DemandSite {
            id,
            coords,
            tier,
            demand_scu,
            mix_ratio,
            sla_minutes,
        });
    }

    // Dense response-time tensor, t_ijl = distance / level speed.
    let mut response_time = Vec::with_capacity(params.n_candidates * params.n_sites * Level::COUNT);
    let mut max_t: f64 = 0.0;
    for cand in &candidates {
        for site in &sites {
            let dist = geodesic_km(cand.coords, site.coords).max(1e-6);
            for level in Level::ALL {
                let speed = levels.iter().find(|s| s.level == level).unwrap().response_speed;
                let t = dist / speed;
                max_t = max_t.max(t);
                response_time.push(t);
            }
        }
    }

    Instance {
        meta: InstanceMeta {
            name: format!(
                "hrcd-{}-{}x{}-seed{}",
                scenario.name, params.n_candidates, params.n_sites, params.seed
            ),
            seed: Some(params.seed),
        },
        scenario,
        levels,
        candidates,
        sites,
        response_time,
        big_m: 10.0 * max_t,
    fixed_cost_override: None,
    }
}

fn lerp(a: Coords, b: Coords, t: f64) -> Coords {
    Coords::new(a.lat + (b.lat - a.lat) * t, a.lon + (b.lon - a.lon) * t)
}
