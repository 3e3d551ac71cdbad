use plaplab::layers::{build_layer_datum, Sign, StepFunction};
use plaplab::potential::PotentialParams;
use plaplab::solver::energy;
use plaplab::grid::Grid;

fn main() {
    for (p, n) in [(2.0, 2.0), (2.0, 4.0)] {
        for eps in [0.2, 0.1, 0.05] {
            for cpe in [8.0, 16.0, 32.0] {
                let pars = PotentialParams::new(p, n, eps).unwrap();
                let v = StepFunction::new(-1.0, 1.0, vec![-0.45, 0.45], Sign::Minus).unwrap();
                let grid = Grid::resolving(-1.0, 1.0, eps, cpe).unwrap();
                let u = build_layer_datum(&v, &pars, &grid).unwrap();
                let e = energy(&u, &pars);
                let ncp = 2.0 * pars.transition_energy().unwrap();
                println!("p={p} n={n} eps={eps} cpe={cpe}: E_h={e:.10} 2c_p={ncp:.10} E_h-2c_p={:+.3e}", e - ncp);
            }
        }
    }
}
