//! Problem data model: demand sites, candidate command centers, operational
//! levels, scenarios, and the response-time tensor, plus validation and the
//! JSON instance file format.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Currency in whole dollars.
pub type Money = i64;

/// Absolute tolerance for fractional comparisons (coverage sums, ratios).
pub const EPS: f64 = 1e-9;

/// Infrastructure criticality tier of a demand site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    Tier1,
    Tier2,
    Tier3,
}

impl Tier {
    pub const ALL: [Tier; 3] = [Tier::Tier1, Tier::Tier2, Tier::Tier3];

    /// Criticality rank: 0 is most critical.
    pub fn rank(self) -> usize {
        match self {
            Tier::Tier1 => 0,
            Tier::Tier2 => 1,
            Tier::Tier3 => 2,
        }
    }

    /// Inclusive SCU demand band for sites of this tier.
    pub fn demand_band(self) -> (f64, f64) {
        match self {
            Tier::Tier1 => (15.0, 21.0),
            Tier::Tier2 => (8.0, 15.0),
            Tier::Tier3 => (3.0, 8.0),
        }
    }

    /// Inclusive band for the site mix ratio alpha_j.
    pub fn mix_band(self) -> (f64, f64) {
        match self {
            Tier::Tier1 => (1.01, 2.0),
            Tier::Tier2 => (1.0, 1.0),
            Tier::Tier3 => (0.1, 0.99),
        }
    }

    /// Default response-time SLA in minutes. Tier-1 carries the strict
    /// 5-minute SLA; the other two are generator defaults, overridable
    /// per site.
    pub fn default_sla_minutes(self) -> f64 {
        match self {
            Tier::Tier1 => 5.0,
            Tier::Tier2 => 15.0,
            Tier::Tier3 => 30.0,
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tier::Tier1 => write!(f, "tier1"),
            Tier::Tier2 => write!(f, "tier2"),
            Tier::Tier3 => write!(f, "tier3"),
        }
    }
}

/// The two dispatchable resource kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResourceKind {
    Robot,
    Human,
}

impl ResourceKind {
    pub const ALL: [ResourceKind; 2] = [ResourceKind::Robot, ResourceKind::Human];
}

impl fmt::Display for ResourceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResourceKind::Robot => write!(f, "robot"),
            ResourceKind::Human => write!(f, "human"),
        }
    }
}

/// A pair of per-resource values, one per [`ResourceKind`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PerResource<T> {
    pub robot: T,
    pub human: T,
}

impl<T: Copy> PerResource<T> {
    pub fn new(robot: T, human: T) -> Self {
        Self { robot, human }
    }

    pub fn get(self, kind: ResourceKind) -> T {
        match kind {
            ResourceKind::Robot => self.robot,
            ResourceKind::Human => self.human,
        }
    }
}

/// Operational level of a command center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    High,
    Medium,
    Low,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::High, Level::Medium, Level::Low];
    pub const COUNT: usize = 3;

    /// Position in the response-time tensor's level axis.
    pub fn index(self) -> usize {
        match self {
            Level::High => 0,
            Level::Medium => 1,
            Level::Low => 2,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::High => write!(f, "high"),
            Level::Medium => write!(f, "medium"),
            Level::Low => write!(f, "low"),
        }
    }
}

/// Latitude/longitude in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coords {
    pub lat: f64,
    pub lon: f64,
}

impl Coords {
    pub fn new(lat: f64, lon: f64) -> Self {
        Self { lat, lon }
    }
}

/// One protected asset demanding surveillance coverage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemandSite {
    pub id: usize,
    pub coords: Coords,
    pub tier: Tier,
    /// Required Surveillance Coverage Units, D_j.
    pub demand_scu: f64,
    /// Human-to-robot demand split ratio, alpha_j.
    pub mix_ratio: f64,
    /// Maximum allowable response time, S_j.
    pub sla_minutes: f64,
}

impl DemandSite {
    /// Robot share of the site's demand: D_j / (1 + alpha_j).
    pub fn robot_demand(&self) -> f64 {
        self.demand_scu / (1.0 + self.mix_ratio)
    }

    /// Human share of the site's demand: D_j * alpha_j / (1 + alpha_j).
    pub fn human_demand(&self) -> f64 {
        self.demand_scu * self.mix_ratio / (1.0 + self.mix_ratio)
    }
}

/// Cost, capacity, and speed profile of one operational level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSpec {
    pub level: Level,
    /// Multiplier applied to a candidate's base fixed cost.
    pub fixed_cost_multiplier: f64,
    /// MAXCAP_lk: hard per-resource capacity.
    pub max_cap: PerResource<u32>,
    /// MINCAP_lk: minimum staffing when a facility opens at this level.
    pub min_cap: PerResource<u32>,
    /// Dispatch speed in km per minute.
    pub response_speed: f64,
}

/// A location where a command center may be built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateLocation {
    pub id: usize,
    pub coords: Coords,
    /// Base fixed cost; F_il = round(base * level multiplier).
    pub base_fixed_cost: Money,
    /// C_ik: per-unit deployment cost at this location.
    pub unit_cost: PerResource<Money>,
}

/// Named technology-maturity scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioName {
    Conservative,
    Balanced,
    Future,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 3] = [
        ScenarioName::Conservative,
        ScenarioName::Balanced,
        ScenarioName::Future,
    ];
}

impl fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioName::Conservative => write!(f, "conservative"),
            ScenarioName::Balanced => write!(f, "balanced"),
            ScenarioName::Future => write!(f, "future"),
        }
    }
}

impl std::str::FromStr for ScenarioName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "conservative" => Ok(ScenarioName::Conservative),
            "balanced" => Ok(ScenarioName::Balanced),
            "future" => Ok(ScenarioName::Future),
            other => Err(format!("unknown scenario '{other}'")),
        }
    }
}

/// Global scenario parameters: supervision policy and cost adjustments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub name: ScenarioName,
    /// Minimum humans per robot at each facility (1:3 is stored as 1/3).
    pub supervision_ratio: f64,
    /// Multiplier on the robot unit cost.
    pub robot_cost_multiplier: f64,
    /// Multiplier applied to every alpha_j before tier-band clamping.
    pub mix_scaler: f64,
}

impl ScenarioConfig {
    /// The preset (supervision ratio, robot cost multiplier, mix scaler)
    /// triple for a named scenario.
    pub fn preset(name: ScenarioName) -> ScenarioConfig {
        let (supervision_ratio, robot_cost_multiplier, mix_scaler) = match name {
            ScenarioName::Conservative => (1.0 / 3.0, 1.0, 1.5),
            ScenarioName::Balanced => (1.0 / 5.0, 0.9, 0.8),
            ScenarioName::Future => (1.0 / 10.0, 0.8, 0.25),
        };
        ScenarioConfig {
            name,
            supervision_ratio,
            robot_cost_multiplier,
            mix_scaler,
        }
    }

    pub fn conservative() -> ScenarioConfig {
        Self::preset(ScenarioName::Conservative)
    }

    pub fn balanced() -> ScenarioConfig {
        Self::preset(ScenarioName::Balanced)
    }

    pub fn future() -> ScenarioConfig {
        Self::preset(ScenarioName::Future)
    }
}

/// Free-form instance metadata.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct InstanceMeta {
    #[serde(default)]
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A full problem instance. Immutable after construction; share freely
/// across solver workers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    #[serde(default)]
    pub meta: InstanceMeta,
    pub scenario: ScenarioConfig,
    pub levels: Vec<LevelSpec>,
    pub candidates: Vec<CandidateLocation>,
    pub sites: Vec<DemandSite>,
    /// Dense row-major t_ijl tensor, |I| * |J| * |L| minutes, index order (i, j, l).
    pub response_time: Vec<f64>,
    /// Big-M constant dominating every t_ijl.
    pub big_m: f64,
    /// Optional raw F_il override, row-major |I| * |L|. When absent,
    /// F_il = round(base_fixed_cost * fixed_cost_multiplier).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_cost_override: Option<Vec<Money>>,
}

impl Instance {
    pub fn n_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    /// Response time t_ijl in minutes.
    pub fn response_time(&self, candidate: usize, site: usize, level: Level) -> f64 {
        let idx = (candidate * self.sites.len() + site) * Level::COUNT + level.index();
        self.response_time[idx]
    }

    /// The level spec for `level`. Panics if the instance lacks it;
    /// validation guarantees exactly one spec per level.
    pub fn level_spec(&self, level: Level) -> &LevelSpec {
        self.levels
            .iter()
            .find(|s| s.level == level)
            .expect("instance has no spec for level")
    }

    /// Fixed cost F_il of opening candidate `i` at `level`.
    pub fn fixed_cost(&self, candidate: usize, level: Level) -> Money {
        if let Some(table) = &self.fixed_cost_override {
            return table[candidate * Level::COUNT + level.index()];
        }
        let base = self.candidates[candidate].base_fixed_cost as f64;
        (base * self.level_spec(level).fixed_cost_multiplier).round() as Money
    }

    /// Whether candidate `i` at `level` can serve site `j` within its SLA.
    pub fn within_sla(&self, candidate: usize, site: usize, level: Level) -> bool {
        self.response_time(candidate, site, level) <= self.sites[site].sla_minutes + EPS
    }

    pub fn total_demand_scu(&self) -> f64 {
        self.sites.iter().map(|s| s.demand_scu).sum()
    }
}

/// One breached invariant, naming the entity and field at fault.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub entity: String,
    pub field: String,
    pub message: String,
}

impl Violation {
    fn new(entity: impl Into<String>, field: impl Into<String>, message: String) -> Self {
        Violation {
            entity: entity.into(),
            field: field.into(),
            message,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.entity, self.field, self.message)
    }
}

/// Checks every data invariant and returns the violations found. Total:
/// never fails, the empty list means the instance is well-formed.
pub fn validate_instance(instance: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();

    // Level table: one spec per level, ordered caps, High dominant.
    for level in Level::ALL {
        let count = instance.levels.iter().filter(|s| s.level == level).count();
        if count != 1 {
            out.push(Violation::new(
                "levels",
                "level",
                format!("expected exactly one spec for {level}, found {count}"),
            ));
        }
    }
    for spec in &instance.levels {
        let entity = format!("level {}", spec.level);
        if spec.fixed_cost_multiplier <= 0.0 {
            out.push(Violation::new(
                &entity,
                "fixed_cost_multiplier",
                format!("must be positive, got {}", spec.fixed_cost_multiplier),
            ));
        }
        if spec.response_speed <= 0.0 {
            out.push(Violation::new(
                &entity,
                "response_speed",
                format!("must be positive, got {}", spec.response_speed),
            ));
        }
        for kind in ResourceKind::ALL {
            if spec.min_cap.get(kind) > spec.max_cap.get(kind) {
                out.push(Violation::new(
                    &entity,
                    format!("min_cap.{kind}"),
                    format!(
                        "min_cap {} exceeds max_cap {}",
                        spec.min_cap.get(kind),
                        spec.max_cap.get(kind)
                    ),
                ));
            }
        }
    }
    if instance.levels.iter().filter(|s| s.level == Level::High).count() == 1 {
        let high = instance.level_spec(Level::High);
        for spec in &instance.levels {
            if spec.level == Level::High {
                continue;
            }
            if spec.max_cap.robot > high.max_cap.robot {
                out.push(Violation::new(
                    "levels",
                    "max_cap.robot",
                    format!(
                        "high level must have the largest robot capacity ({} < {} at {})",
                        high.max_cap.robot, spec.max_cap.robot, spec.level
                    ),
                ));
            }
            if spec.fixed_cost_multiplier > high.fixed_cost_multiplier {
                out.push(Violation::new(
                    "levels",
                    "fixed_cost_multiplier",
                    format!(
                        "high level must have the largest multiplier ({} < {} at {})",
                        high.fixed_cost_multiplier, spec.fixed_cost_multiplier, spec.level
                    ),
                ));
            }
        }
    }

    // Candidates.
    for (idx, cand) in instance.candidates.iter().enumerate() {
        let entity = format!("candidate {}", cand.id);
        if cand.id != idx {
            out.push(Violation::new(
                &entity,
                "id",
                format!("must equal its position {idx}"),
            ));
        }
        if cand.base_fixed_cost <= 0 {
            out.push(Violation::new(
                &entity,
                "base_fixed_cost",
                format!("must be positive, got {}", cand.base_fixed_cost),
            ));
        }
        for kind in ResourceKind::ALL {
            if cand.unit_cost.get(kind) <= 0 {
                out.push(Violation::new(
                    &entity,
                    format!("unit_cost.{kind}"),
                    format!("must be positive, got {}", cand.unit_cost.get(kind)),
                ));
            }
        }
    }

    // Sites.
    for (idx, site) in instance.sites.iter().enumerate() {
        let entity = format!("site {}", site.id);
        if site.id != idx {
            out.push(Violation::new(
                &entity,
                "id",
                format!("must equal its position {idx}"),
            ));
        }
        if site.demand_scu <= 0.0 {
            out.push(Violation::new(
                &entity,
                "demand_scu",
                format!("must be positive, got {}", site.demand_scu),
            ));
        } else {
            let (lo, hi) = site.tier.demand_band();
            if site.demand_scu < lo - EPS || site.demand_scu > hi + EPS {
                out.push(Violation::new(
                    &entity,
                    "demand_scu",
                    format!(
                        "{} outside {} band [{lo}, {hi}]",
                        site.demand_scu, site.tier
                    ),
                ));
            }
        }
        let (lo, hi) = site.tier.mix_band();
        if site.mix_ratio < lo - EPS || site.mix_ratio > hi + EPS {
            out.push(Violation::new(
                &entity,
                "mix_ratio",
                format!("{} outside {} band [{lo}, {hi}]", site.mix_ratio, site.tier),
            ));
        }
        if site.sla_minutes <= 0.0 {
            out.push(Violation::new(
                &entity,
                "sla_minutes",
                format!("must be positive, got {}", site.sla_minutes),
            ));
        }
    }

    // Scenario preset table.
    let preset = ScenarioConfig::preset(instance.scenario.name);
    if (instance.scenario.supervision_ratio - preset.supervision_ratio).abs() > EPS {
        out.push(Violation::new(
            "scenario",
            "supervision_ratio",
            format!(
                "{} must be {} for {}",
                instance.scenario.supervision_ratio, preset.supervision_ratio, preset.name
            ),
        ));
    }
    if (instance.scenario.robot_cost_multiplier - preset.robot_cost_multiplier).abs() > EPS {
        out.push(Violation::new(
            "scenario",
            "robot_cost_multiplier",
            format!(
                "{} must be {} for {}",
                instance.scenario.robot_cost_multiplier, preset.robot_cost_multiplier, preset.name
            ),
        ));
    }
    if instance.scenario.mix_scaler <= 0.0 {
        out.push(Violation::new(
            "scenario",
            "mix_scaler",
            format!("must be positive, got {}", instance.scenario.mix_scaler),
        ));
    }

    // Response-time tensor shape and contents.
    let expect = instance.candidates.len() * instance.sites.len() * Level::COUNT;
    if instance.response_time.len() != expect {
        out.push(Violation::new(
            "response_time",
            "len",
            format!(
                "expected {expect} entries (|I|*|J|*|L|), got {}",
                instance.response_time.len()
            ),
        ));
    } else {
        let mut max_t: f64 = 0.0;
        'scan: for (idx, &t) in instance.response_time.iter().enumerate() {
            if !t.is_finite() || t <= 0.0 {
                out.push(Violation::new(
                    "response_time",
                    format!("entry {idx}"),
                    format!("must be finite and positive, got {t}"),
                ));
                break 'scan;
            }
            if t > max_t {
                max_t = t;
            }
        }
        // Faster levels never respond slower for the same (i, j).
        if instance.levels.len() == Level::COUNT {
            'pairs: for i in 0..instance.candidates.len() {
                for j in 0..instance.sites.len() {
                    for a in Level::ALL {
                        for b in Level::ALL {
                            let (sa, sb) = (
                                instance.level_spec(a).response_speed,
                                instance.level_spec(b).response_speed,
                            );
                            if sa >= sb
                                && instance.response_time(i, j, a)
                                    > instance.response_time(i, j, b) + EPS
                            {
                                out.push(Violation::new(
                                    format!("response_time ({i}, {j})"),
                                    "level order",
                                    format!(
                                        "t at {a} (speed {sa}) exceeds t at {b} (speed {sb})"
                                    ),
                                ));
                                break 'pairs;
                            }
                        }
                    }
                }
            }
        }
        if instance.big_m < max_t - EPS {
            out.push(Violation::new(
                "instance",
                "big_m",
                format!("{} is below max response time {max_t}", instance.big_m),
            ));
        }
    }
    if !(instance.big_m > 0.0) {
        out.push(Violation::new(
            "instance",
            "big_m",
            format!("must be positive, got {}", instance.big_m),
        ));
    }

    if let Some(table) = &instance.fixed_cost_override {
        let expect = instance.candidates.len() * Level::COUNT;
        if table.len() != expect {
            out.push(Violation::new(
                "fixed_cost_override",
                "len",
                format!("expected {expect} entries, got {}", table.len()),
            ));
        } else if let Some(bad) = table.iter().position(|&f| f <= 0) {
            out.push(Violation::new(
                "fixed_cost_override",
                format!("entry {bad}"),
                format!("must be positive, got {}", table[bad]),
            ));
        }
    }

    out
}

/// Failure to read an instance document.
#[derive(Debug, Error)]
pub enum LoadError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid instance: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Serializes an instance to the JSON document format. Deterministic:
/// identical instances yield identical bytes.
pub fn save_instance(instance: &Instance) -> String {
    let mut text = serde_json::to_string_pretty(instance).expect("instance serialization");
    text.push('\n');
    text
}

/// Parses and validates an instance document.
pub fn load_instance(bytes: &[u8]) -> Result<Instance, LoadError> {
    let instance: Instance = serde_json::from_slice(bytes)?;
    let violations = validate_instance(&instance);
    if violations.is_empty() {
        Ok(instance)
    } else {
        Err(LoadError::Invalid(violations))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate_instance, GeneratorParams};

    fn small_instance() -> Instance {
        generate_instance(&GeneratorParams::new(42, 15, 50, ScenarioConfig::conservative()))
    }

    #[test]
    fn scenario_presets_match_the_published_table() {
        let c = ScenarioConfig::conservative();
        assert!((c.supervision_ratio - 1.0 / 3.0).abs() < EPS);
        assert_eq!(c.robot_cost_multiplier, 1.0);
        let b = ScenarioConfig::balanced();
        assert!((b.supervision_ratio - 1.0 / 5.0).abs() < EPS);
        assert_eq!(b.robot_cost_multiplier, 0.9);
        let f = ScenarioConfig::future();
        assert!((f.supervision_ratio - 1.0 / 10.0).abs() < EPS);
        assert_eq!(f.robot_cost_multiplier, 0.8);
    }

    #[test]
    fn well_formed_instance_has_no_violations() {
        assert_eq!(validate_instance(&small_instance()), Vec::new());
    }

    #[test]
    fn tier2_mix_ratio_outside_band_is_flagged() {
        let mut instance = small_instance();
        let site = instance
            .sites
            .iter_mut()
            .find(|s| s.tier == Tier::Tier2)
            .expect("generated instance has a tier-2 site");
        site.mix_ratio = 1.3;
        let violations = validate_instance(&instance);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].field, "mix_ratio");
    }

    #[test]
    fn undersized_big_m_is_flagged() {
        let mut instance = small_instance();
        instance.big_m = 1.0;
        let max_t = instance
            .response_time
            .iter()
            .cloned()
            .fold(f64::MIN, f64::max);
        assert!(max_t > 1.0, "fixture must have response times above 1 minute");
        let violations = validate_instance(&instance);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].field, "big_m");
    }

    #[test]
    fn save_then_load_round_trips() {
        let instance = small_instance();
        let bytes = save_instance(&instance);
        let reloaded = load_instance(bytes.as_bytes()).expect("round trip");
        assert_eq!(instance, reloaded);
    }

    #[test]
    fn missing_response_time_is_a_parse_error() {
        let mut doc: serde_json::Value =
            serde_json::from_str(&save_instance(&small_instance())).unwrap();
        doc.as_object_mut().unwrap().remove("response_time");
        let err = load_instance(doc.to_string().as_bytes()).unwrap_err();
        assert!(matches!(err, LoadError::Parse(_)), "got {err:?}");
    }

    #[test]
    fn negative_demand_is_a_validation_error() {
        let mut instance = small_instance();
        instance.sites[0].demand_scu = -4.0;
        let bytes = save_instance(&instance);
        let err = load_instance(bytes.as_bytes()).unwrap_err();
        match err {
            LoadError::Invalid(violations) => {
                assert!(violations.iter().any(|v| v.field == "demand_scu"));
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn fixed_cost_is_base_times_level_multiplier() {
        let instance = small_instance();
        let base = instance.candidates[0].base_fixed_cost as f64;
        let mult = instance.level_spec(Level::High).fixed_cost_multiplier;
        assert_eq!(
            instance.fixed_cost(0, Level::High),
            (base * mult).round() as Money
        );
    }

    #[test]
    fn fixed_cost_override_takes_precedence() {
        let mut instance = small_instance();
        let n = instance.n_candidates();
        instance.fixed_cost_override = Some(vec![77_000; n * Level::COUNT]);
        assert_eq!(instance.fixed_cost(3, Level::Low), 77_000);
        assert!(validate_instance(&instance).is_empty());
    }
}
