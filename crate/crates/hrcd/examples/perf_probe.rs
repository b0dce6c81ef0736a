use hrcd::bench::{run_experiment, ExperimentSpec, Method, Scale};
use hrcd::exact::{solve_exact, SolverLimits};
use hrcd::generate::{generate_instance, GeneratorParams};
use hrcd::heuristic::{solve_heuristic, HeuristicParams};
use hrcd::model::{objective, optimality_gap};
use hrcd::{ScenarioConfig, ScenarioName};
use std::time::Instant;

fn main() {
    let arg: String = std::env::args().nth(1).unwrap_or_default();
    if arg == "small" {
        for scenario in ScenarioName::ALL {
            for seed in [42u64, 1, 2] {
                let params = GeneratorParams::new(seed, 15, 50, ScenarioConfig::preset(scenario));
                let instance = generate_instance(&params);
                let t0 = Instant::now();
                let exact = solve_exact(&instance, &SolverLimits::exact(120.0));
                let te = t0.elapsed().as_secs_f64();
                let t1 = Instant::now();
                let (hsol, _) = solve_heuristic(&instance, &HeuristicParams::default()).unwrap();
                let th = t1.elapsed().as_secs_f64();
                let hcost = objective(&instance, &hsol).unwrap().total;
                let ecost = exact.incumbent_cost.unwrap_or(-1);
                println!(
                    "{scenario:?} seed {seed}: exact {ecost} ({:?}, {te:.2}s, {} nodes) heur {hcost} ({th:.2}s) gap {:?}",
                    exact.status, exact.nodes_explored, optimality_gap(hcost, ecost)
                );
            }
        }
    } else if arg == "large" {
        for scenario in ScenarioName::ALL {
            let params = GeneratorParams::new(42, 500, 5000, ScenarioConfig::preset(scenario));
            let t0 = Instant::now();
            let instance = generate_instance(&params);
            let tg = t0.elapsed().as_secs_f64();
            let t1 = Instant::now();
            let (hsol, trace) = solve_heuristic(&instance, &HeuristicParams::default()).unwrap();
            let th = t1.elapsed().as_secs_f64();
            let hcost = objective(&instance, &hsol).unwrap().total;
            println!(
                "{scenario:?}: gen {tg:.1}s heur {th:.1}s cost {hcost} open {} iters {} moves {:?}",
                hsol.open_count(), trace.iterations, trace.moves_applied
            );
        }
    } else if arg == "oracle" {
        let t0 = Instant::now();
        let mut n = 0;
        for seed in 0..100u64 {
            let params = GeneratorParams::new(
                seed, 2 + (seed % 3) as usize, 4 + (seed % 5) as usize,
                ScenarioConfig::preset(ScenarioName::ALL[(seed % 3) as usize]));
            let instance = generate_instance(&params);
            let oracle = hrcd::exact::brute_force_optimum(&instance).unwrap();
            let exact = solve_exact(&instance, &SolverLimits::exact(60.0));
            assert_eq!(exact.incumbent_cost, oracle.incumbent_cost, "seed {seed}");
            n += 1;
        }
        println!("oracle x{n}: {:.1}s", t0.elapsed().as_secs_f64());
    } else if arg == "largexact" {
        let params = GeneratorParams::new(42, 500, 5000, ScenarioConfig::conservative());
        let instance = generate_instance(&params);
        let t0 = Instant::now();
        let result = solve_exact(&instance, &SolverLimits { time_limit_s: 60.0, gap_limit: 0.0, node_limit: None });
        println!("large exact 60s: {:?} inc {:?} nodes {} wall {:.1}s total {:.1}s",
            result.status, result.incumbent_cost, result.nodes_explored, result.wall_time_s,
            t0.elapsed().as_secs_f64());
    } else {
        let spec = ExperimentSpec {
            scale: Scale::Custom(6, 14),
            scenarios: ScenarioName::ALL.to_vec(),
            methods: vec![Method::Exact, Method::Heuristic],
            seeds: vec![1, 2, 3],
            limits: SolverLimits::exact(60.0),
            heuristic: HeuristicParams::default(),
        };
        let t0 = Instant::now();
        let rows = run_experiment(&spec);
        let (text, _) = hrcd::bench::emit_table(&rows);
        println!("{text}\n{:.1}s", t0.elapsed().as_secs_f64());
    }
}
