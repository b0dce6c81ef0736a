//! Decision representation, objective evaluation, constraint checking, and
//! minimal-staffing derivation, plus the solution file format.
//!
//! Cost arithmetic is exact integer dollars. The only reals are the
//! fractional coverage sums, compared with absolute tolerance [`EPS`]
//! before any ceiling is taken.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{Instance, Level, Money, PerResource, ResourceKind, EPS};

/// An opened command center: its level and deployed resources (z_ik).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpenFacility {
    pub level: Level,
    pub staff: PerResource<u32>,
}

/// A complete decision triple: facility levels (x), single-sourced site
/// assignments (y), and per-facility resource counts (z).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    /// Indexed by candidate id; `None` means the candidate stays closed.
    pub facilities: Vec<Option<OpenFacility>>,
    /// Indexed by site id; the serving candidate id.
    pub assignment: Vec<usize>,
}

impl Solution {
    pub fn empty(n_candidates: usize) -> Self {
        Solution {
            facilities: vec![None; n_candidates],
            assignment: Vec::new(),
        }
    }

    pub fn open_count(&self) -> usize {
        self.facilities.iter().filter(|f| f.is_some()).count()
    }

    pub fn total_staff(&self, kind: ResourceKind) -> u64 {
        self.facilities
            .iter()
            .flatten()
            .map(|f| f.staff.get(kind) as u64)
            .sum()
    }

    /// Site ids assigned to `candidate`, in ascending order.
    pub fn sites_of(&self, candidate: usize) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter(|&(_, &i)| i == candidate)
            .map(|(j, _)| j)
            .collect()
    }
}

/// Objective value split per Eq-style bookkeeping: fixed infrastructure
/// plus variable deployment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub fixed: Money,
    pub variable: Money,
    pub total: Money,
}

/// The nine constraint families a solution is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstraintTag {
    SingleLevel,
    Coverage,
    Linking,
    Sla,
    MaxCap,
    MinCap,
    RobotCoverage,
    HumanCoverage,
    Supervision,
}

impl fmt::Display for ConstraintTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ConstraintTag::SingleLevel => "single-level",
            ConstraintTag::Coverage => "coverage",
            ConstraintTag::Linking => "linking",
            ConstraintTag::Sla => "sla",
            ConstraintTag::MaxCap => "max-cap",
            ConstraintTag::MinCap => "min-cap",
            ConstraintTag::RobotCoverage => "robot-coverage",
            ConstraintTag::HumanCoverage => "human-coverage",
            ConstraintTag::Supervision => "supervision",
        };
        write!(f, "{name}")
    }
}

/// A breached constraint with the entities involved and the signed slack
/// (negative means violated by that amount).
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintViolation {
    pub constraint: ConstraintTag,
    pub facility: Option<usize>,
    pub site: Option<usize>,
    pub slack: f64,
}

impl fmt::Display for ConstraintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constraint)?;
        if let Some(i) = self.facility {
            write!(f, " facility={i}")?;
        }
        if let Some(j) = self.site {
            write!(f, " site={j}")?;
        }
        write!(f, " slack={:.4}", self.slack)
    }
}

/// Outcome of a full feasibility check; empty iff the solution satisfies
/// every constraint family.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeasibilityReport {
    pub violations: Vec<ConstraintViolation>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Structural contract breach: the solution does not even index into the
/// instance. Distinct from constraint violations, which are data.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("solution covers {got} sites, instance has {expected}")]
    AssignmentLength { expected: usize, got: usize },
    #[error("solution describes {got} candidates, instance has {expected}")]
    FacilityLength { expected: usize, got: usize },
    #[error("site {site} assigned to out-of-range candidate {candidate}")]
    CandidateOutOfRange { site: usize, candidate: usize },
}

/// Staffing demand exceeds the level's physical capacity; the caller must
/// upgrade the level or split the assignment set.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("{kind} demand {needed} exceeds capacity {max}")]
pub struct CapacityExceeded {
    pub kind: ResourceKind,
    pub needed: u32,
    pub max: u32,
}

fn check_shape(instance: &Instance, solution: &Solution) -> Result<(), ModelError> {
    if solution.assignment.len() != instance.n_sites() {
        return Err(ModelError::AssignmentLength {
            expected: instance.n_sites(),
            got: solution.assignment.len(),
        });
    }
    if solution.facilities.len() != instance.n_candidates() {
        return Err(ModelError::FacilityLength {
            expected: instance.n_candidates(),
            got: solution.facilities.len(),
        });
    }
    if let Some((site, &candidate)) = solution
        .assignment
        .iter()
        .enumerate()
        .find(|&(_, &i)| i >= instance.n_candidates())
    {
        return Err(ModelError::CandidateOutOfRange { site, candidate });
    }
    Ok(())
}

/// Total system cost of a solution: sum of F_il over open facilities plus
/// sum of C_ik * z_ik. Exact integer arithmetic.
pub fn objective(instance: &Instance, solution: &Solution) -> Result<CostBreakdown, ModelError> {
    check_shape(instance, solution)?;
    let mut fixed: Money = 0;
    let mut variable: Money = 0;
    for (i, fac) in solution.facilities.iter().enumerate() {
        if let Some(fac) = fac {
            fixed += instance.fixed_cost(i, fac.level);
            let unit = instance.candidates[i].unit_cost;
            variable += unit.robot * fac.staff.robot as Money;
            variable += unit.human * fac.staff.human as Money;
        }
    }
    Ok(CostBreakdown {
        fixed,
        variable,
        total: fixed + variable,
    })
}

/// Evaluates all nine constraint families and reports every violation.
/// The SLA check uses the direct form t <= S_j for assigned pairs, which
/// the big-M dominance invariant makes equivalent to the relaxed form.
pub fn check_feasibility(
    instance: &Instance,
    solution: &Solution,
) -> Result<FeasibilityReport, ModelError> {
    check_shape(instance, solution)?;
    let mut violations = Vec::new();
    let alpha = instance.scenario.supervision_ratio;

    // Coverage and linking. Single-sourcing and one-level-per-facility are
    // structural in this representation, so those two families cannot
    // trigger here; they are still reported for malformed hand-built data
    // via the shape check above.
    let mut robot_load = vec![0.0f64; instance.n_candidates()];
    let mut human_load = vec![0.0f64; instance.n_candidates()];
    for (j, &i) in solution.assignment.iter().enumerate() {
        match &solution.facilities[i] {
            None => violations.push(ConstraintViolation {
                constraint: ConstraintTag::Linking,
                facility: Some(i),
                site: Some(j),
                slack: -1.0,
            }),
            Some(fac) => {
                let t = instance.response_time(i, j, fac.level);
                let sla = instance.sites[j].sla_minutes;
                if t > sla + EPS {
                    violations.push(ConstraintViolation {
                        constraint: ConstraintTag::Sla,
                        facility: Some(i),
                        site: Some(j),
                        slack: sla - t,
                    });
                }
                robot_load[i] += instance.sites[j].robot_demand();
                human_load[i] += instance.sites[j].human_demand();
            }
        }
    }

    for (i, fac) in solution.facilities.iter().enumerate() {
        let Some(fac) = fac else { continue };
        let spec = instance.level_spec(fac.level);
        for kind in ResourceKind::ALL {
            let z = fac.staff.get(kind);
            let max = spec.max_cap.get(kind);
            if z > max {
                violations.push(ConstraintViolation {
                    constraint: ConstraintTag::MaxCap,
                    facility: Some(i),
                    site: None,
                    slack: max as f64 - z as f64,
                });
            }
            let min = spec.min_cap.get(kind);
            if z < min {
                violations.push(ConstraintViolation {
                    constraint: ConstraintTag::MinCap,
                    facility: Some(i),
                    site: None,
                    slack: z as f64 - min as f64,
                });
            }
        }
        let z_robot = fac.staff.robot as f64;
        let z_human = fac.staff.human as f64;
        if z_robot < robot_load[i] - EPS {
            violations.push(ConstraintViolation {
                constraint: ConstraintTag::RobotCoverage,
                facility: Some(i),
                site: None,
                slack: z_robot - robot_load[i],
            });
        }
        if z_human < human_load[i] - EPS {
            violations.push(ConstraintViolation {
                constraint: ConstraintTag::HumanCoverage,
                facility: Some(i),
                site: None,
                slack: z_human - human_load[i],
            });
        }
        if z_human < alpha * z_robot - EPS {
            violations.push(ConstraintViolation {
                constraint: ConstraintTag::Supervision,
                facility: Some(i),
                site: None,
                slack: z_human - alpha * z_robot,
            });
        }
    }

    Ok(FeasibilityReport { violations })
}

/// Ceiling with tolerance: values within [`EPS`] of an integer stay there.
pub(crate) fn ceil_tol(x: f64) -> u32 {
    let c = (x - EPS).ceil();
    if c <= 0.0 {
        0
    } else {
        c as u32
    }
}

/// The cheapest staffing for serving `sites` from a facility at `level`:
/// robots cover D_j / (1 + alpha_j), humans cover the alpha_j share, the
/// MINCAP floors, and the supervision ratio, all rounded up at the
/// facility aggregate. Errs when either count exceeds MAXCAP.
pub fn minimal_staffing(
    instance: &Instance,
    sites: &[usize],
    level: Level,
) -> Result<PerResource<u32>, CapacityExceeded> {
    let mut robot_need = 0.0f64;
    let mut human_need = 0.0f64;
    for &j in sites {
        robot_need += instance.sites[j].robot_demand();
        human_need += instance.sites[j].human_demand();
    }
    minimal_staffing_from_loads(instance, robot_need, human_need, level)
}

/// Same derivation from precomputed demand aggregates.
pub(crate) fn minimal_staffing_from_loads(
    instance: &Instance,
    robot_need: f64,
    human_need: f64,
    level: Level,
) -> Result<PerResource<u32>, CapacityExceeded> {
    let spec = instance.level_spec(level);
    let alpha = instance.scenario.supervision_ratio;
    let robots = ceil_tol(robot_need).max(spec.min_cap.robot);
    let humans = ceil_tol(human_need)
        .max(spec.min_cap.human)
        .max(ceil_tol(alpha * robots as f64));
    if robots > spec.max_cap.robot {
        return Err(CapacityExceeded {
            kind: ResourceKind::Robot,
            needed: robots,
            max: spec.max_cap.robot,
        });
    }
    if humans > spec.max_cap.human {
        return Err(CapacityExceeded {
            kind: ResourceKind::Human,
            needed: humans,
            max: spec.max_cap.human,
        });
    }
    Ok(PerResource::new(robots, humans))
}

/// Relative heuristic excess over the exact cost, as a percentage rounded
/// to two decimals. `None` when the exact cost is not positive.
pub fn optimality_gap(heuristic_cost: Money, exact_cost: Money) -> Option<f64> {
    if exact_cost <= 0 {
        return None;
    }
    let gap = 100.0 * (heuristic_cost - exact_cost) as f64 / exact_cost as f64;
    Some((gap * 100.0).round() / 100.0)
}

// ---------------------------------------------------------------------------
// Solution file format
// ---------------------------------------------------------------------------

/// `meta` block of a solution document.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SolutionMeta {
    #[serde(default)]
    pub solver: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct FacilityDoc {
    id: usize,
    level: Level,
    robots: u32,
    humans: u32,
}

/// On-disk shape of a solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionDoc {
    pub meta: SolutionMeta,
    facilities: Vec<FacilityDoc>,
    assignments: BTreeMap<usize, usize>,
    pub cost: CostBreakdown,
}

impl SolutionDoc {
    pub fn new(solution: &Solution, cost: CostBreakdown, meta: SolutionMeta) -> Self {
        let facilities = solution
            .facilities
            .iter()
            .enumerate()
            .filter_map(|(id, fac)| {
                fac.map(|f| FacilityDoc {
                    id,
                    level: f.level,
                    robots: f.staff.robot,
                    humans: f.staff.human,
                })
            })
            .collect();
        let assignments = solution
            .assignment
            .iter()
            .enumerate()
            .map(|(site, &fac)| (site, fac))
            .collect();
        SolutionDoc {
            meta,
            facilities,
            assignments,
            cost,
        }
    }

    /// Reconstructs the in-memory solution; `n_candidates` sizes the
    /// facility table.
    pub fn to_solution(&self, n_candidates: usize) -> Solution {
        let mut facilities = vec![None; n_candidates];
        for fac in &self.facilities {
            if fac.id < n_candidates {
                facilities[fac.id] = Some(OpenFacility {
                    level: fac.level,
                    staff: PerResource::new(fac.robots, fac.humans),
                });
            }
        }
        let n_sites = self.assignments.keys().max().map_or(0, |&j| j + 1);
        let mut assignment = vec![0usize; n_sites];
        for (&site, &fac) in &self.assignments {
            assignment[site] = fac;
        }
        Solution {
            facilities,
            assignment,
        }
    }
}

/// Serializes a solution document; deterministic byte output.
pub fn save_solution(doc: &SolutionDoc) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("solution serialization");
    text.push('\n');
    text
}

/// Parses a solution document.
pub fn load_solution(bytes: &[u8]) -> Result<SolutionDoc, serde_json::Error> {
    serde_json::from_slice(bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{default_level_specs, generate_instance, GeneratorParams};
    use crate::instance::{
        CandidateLocation, Coords, DemandSite, InstanceMeta, ScenarioConfig, Tier,
    };
    use proptest::prelude::*;

    /// Hand-built instance: one candidate, level table defaults, direct
    /// control of demands and costs.
    fn bespoke_instance(sites: Vec<DemandSite>, scenario: ScenarioConfig) -> Instance {
        let candidates = vec![CandidateLocation {
            id: 0,
            coords: Coords::new(26.3, 50.15),
            base_fixed_cost: 80_000,
            unit_cost: PerResource::new(1200, 3000),
        }];
        let n_sites = sites.len();
        let response_time = (0..n_sites * Level::COUNT).map(|_| 1.0).collect();
        Instance {
            meta: InstanceMeta::default(),
            scenario,
            levels: default_level_specs(),
            candidates,
            sites,
            response_time,
            big_m: 100.0,
            fixed_cost_override: None,
        }
    }

    fn site(id: usize, tier: Tier, demand: f64, mix: f64) -> DemandSite {
        DemandSite {
            id,
            coords: Coords::new(26.3, 50.15),
            tier,
            demand_scu: demand,
            mix_ratio: mix,
            sla_minutes: tier.default_sla_minutes(),
        }
    }

    #[test]
    fn empty_solution_costs_nothing() {
        let instance = bespoke_instance(Vec::new(), ScenarioConfig::conservative());
        let solution = Solution::empty(1);
        let cost = objective(&instance, &solution).unwrap();
        assert_eq!(cost.total, 0);
        assert_eq!(cost.fixed, 0);
        assert_eq!(cost.variable, 0);
    }

    #[test]
    fn objective_is_fixed_plus_variable() {
        // One medium facility: F = 80,000 * 1.0, plus 10 robots and 4 humans.
        let instance = bespoke_instance(
            vec![site(0, Tier::Tier2, 12.0, 1.0)],
            ScenarioConfig::conservative(),
        );
        let solution = Solution {
            facilities: vec![Some(OpenFacility {
                level: Level::Medium,
                staff: PerResource::new(10, 4),
            })],
            assignment: vec![0],
        };
        let cost = objective(&instance, &solution).unwrap();
        assert_eq!(cost.fixed, 80_000);
        assert_eq!(cost.variable, 10 * 1200 + 4 * 3000);
        assert_eq!(cost.total, 104_000);
    }

    #[test]
    fn supervision_holds_at_the_exact_boundary() {
        // 207 robots at alpha = 1/3 need exactly 69 humans.
        let instance = bespoke_instance(
            vec![site(0, Tier::Tier2, 12.0, 1.0)],
            ScenarioConfig::conservative(),
        );
        let solution = Solution {
            facilities: vec![Some(OpenFacility {
                level: Level::High,
                staff: PerResource::new(207, 69),
            })],
            assignment: vec![0],
        };
        let report = check_feasibility(&instance, &solution).unwrap();
        assert!(
            !report
                .violations
                .iter()
                .any(|v| v.constraint == ConstraintTag::Supervision),
            "{:?}",
            report.violations
        );
    }

    #[test]
    fn short_robot_coverage_reports_negative_slack() {
        // D = 12 at alpha_j = 1 splits 6/6; five robots are one short.
        let instance = bespoke_instance(
            vec![site(0, Tier::Tier2, 12.0, 1.0)],
            ScenarioConfig::conservative(),
        );
        let solution = Solution {
            facilities: vec![Some(OpenFacility {
                level: Level::Medium,
                staff: PerResource::new(5, 6),
            })],
            assignment: vec![0],
        };
        let report = check_feasibility(&instance, &solution).unwrap();
        let v = report
            .violations
            .iter()
            .find(|v| v.constraint == ConstraintTag::RobotCoverage)
            .expect("robot coverage violation");
        assert!((v.slack - (-1.0)).abs() < 1e-9, "slack {}", v.slack);
    }

    #[test]
    fn sla_breach_reports_the_shortfall() {
        let mut instance = bespoke_instance(
            vec![site(0, Tier::Tier1, 15.0, 1.5)],
            ScenarioConfig::conservative(),
        );
        // t = 7.0 at every level against the 5-minute tier-1 SLA.
        for t in instance.response_time.iter_mut() {
            *t = 7.0;
        }
        let solution = Solution {
            facilities: vec![Some(OpenFacility {
                level: Level::High,
                staff: PerResource::new(6, 10),
            })],
            assignment: vec![0],
        };
        let report = check_feasibility(&instance, &solution).unwrap();
        let v = report
            .violations
            .iter()
            .find(|v| v.constraint == ConstraintTag::Sla)
            .expect("sla violation");
        assert!((v.slack - (-2.0)).abs() < 1e-9, "slack {}", v.slack);
    }

    #[test]
    fn unassigned_open_facility_still_needs_mincap() {
        let instance = bespoke_instance(
            vec![site(0, Tier::Tier2, 12.0, 1.0)],
            ScenarioConfig::conservative(),
        );
        let staff = minimal_staffing(&instance, &[], Level::High).unwrap();
        assert_eq!(staff, PerResource::new(4, 2));
    }

    #[test]
    fn staffing_covers_demand_and_supervision() {
        // D = 15 at alpha_j = 2: robots ceil(5) = 5, humans max(10, 5/3) = 10.
        let instance =
            bespoke_instance(vec![site(0, Tier::Tier1, 15.0, 2.0)], ScenarioConfig::conservative());
        let staff = minimal_staffing(&instance, &[0], Level::Low).unwrap();
        assert_eq!(staff, PerResource::new(5, 10));
    }

    #[test]
    fn staffing_beyond_capacity_is_rejected() {
        // 36 tier-1 sites at 21 SCU, alpha_j = 1.01: robot need > 240.
        let sites: Vec<_> = (0..36).map(|id| site(id, Tier::Tier1, 21.0, 1.01)).collect();
        let instance = bespoke_instance(sites, ScenarioConfig::conservative());
        let ids: Vec<_> = (0..36).collect();
        let err = minimal_staffing(&instance, &ids, Level::High).unwrap_err();
        assert_eq!(err.kind, ResourceKind::Robot);
        assert_eq!(err.max, 240);
        assert!(err.needed > 240);
    }

    #[test]
    fn gap_reproduces_the_reference_table() {
        assert_eq!(optimality_gap(620_175, 610_175), Some(1.64));
        assert_eq!(optimality_gap(529_200, 508_000), Some(4.17));
        assert_eq!(optimality_gap(68_486_460, 59_951_160), Some(14.24));
    }

    #[test]
    fn gap_is_zero_on_equal_costs_and_guarded_on_zero() {
        assert_eq!(optimality_gap(123_456, 123_456), Some(0.0));
        assert_eq!(optimality_gap(100, 0), None);
    }

    #[test]
    fn solution_document_round_trips() {
        let solution = Solution {
            facilities: vec![
                Some(OpenFacility {
                    level: Level::Medium,
                    staff: PerResource::new(10, 4),
                }),
                None,
            ],
            assignment: vec![0, 0, 0],
        };
        let cost = CostBreakdown {
            fixed: 80_000,
            variable: 24_000,
            total: 104_000,
        };
        let doc = SolutionDoc::new(&solution, cost, SolutionMeta::default());
        let text = save_solution(&doc);
        let parsed = load_solution(text.as_bytes()).unwrap();
        assert_eq!(parsed, doc);
        assert_eq!(parsed.to_solution(2), solution);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Dropping one unit from either staffing count must break some
        /// constraint among min-cap, coverage, and supervision.
        #[test]
        fn minimal_staffing_is_minimal(
            seed in 0u64..500,
            n_sites in 1usize..6,
            scenario_idx in 0usize..3,
            level_idx in 0usize..3,
        ) {
            let scenario = ScenarioConfig::preset(
                crate::instance::ScenarioName::ALL[scenario_idx],
            );
            let alpha = scenario.supervision_ratio;
            let params = GeneratorParams::new(seed, 1, n_sites, scenario);
            let instance = generate_instance(&params);
            let level = Level::ALL[level_idx];
            let ids: Vec<usize> = (0..n_sites).collect();
            let Ok(staff) = minimal_staffing(&instance, &ids, level) else {
                return Ok(());
            };
            let spec = instance.level_spec(level);
            let robot_need: f64 = ids.iter().map(|&j| instance.sites[j].robot_demand()).sum();
            let human_need: f64 = ids.iter().map(|&j| instance.sites[j].human_demand()).sum();

            if staff.robot > 0 {
                let z = staff.robot - 1;
                let broke = z < spec.min_cap.robot || (z as f64) < robot_need - EPS;
                prop_assert!(broke, "robot count {} not minimal", staff.robot);
            }
            if staff.human > 0 {
                let z = staff.human - 1;
                let broke = z < spec.min_cap.human
                    || (z as f64) < human_need - EPS
                    || (z as f64) < alpha * staff.robot as f64 - EPS;
                prop_assert!(broke, "human count {} not minimal", staff.human);
            }
        }

        /// For fixed assignments the human count never drops as the
        /// supervision ratio tightens.
        #[test]
        fn staffing_humans_monotone_in_alpha(seed in 0u64..200, n_sites in 1usize..6) {
            let mut humans = Vec::new();
            for name in [
                crate::instance::ScenarioName::Future,
                crate::instance::ScenarioName::Balanced,
                crate::instance::ScenarioName::Conservative,
            ] {
                let mut scenario = ScenarioConfig::preset(name);
                // Isolate alpha: same mix everywhere.
                scenario.mix_scaler = 1.0;
                let params = GeneratorParams::new(seed, 1, n_sites, scenario);
                let instance = generate_instance(&params);
                let ids: Vec<usize> = (0..n_sites).collect();
                if let Ok(staff) = minimal_staffing(&instance, &ids, Level::High) {
                    humans.push(staff.human);
                }
            }
            for pair in humans.windows(2) {
                prop_assert!(pair[0] <= pair[1]);
            }
        }
    }
}
