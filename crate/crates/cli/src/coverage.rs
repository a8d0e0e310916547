//! Which subcommand exercises each library operation.

/// `(module, operation, subcommand)`.
pub const COVERAGE: &[(&str, &str, &str)] = &[
    ("lattice-core", "seminorm", "torus-seminorm"),
    ("lattice-core", "read_json", "torus-seminorm"),
    ("lattice-core", "write_json", "torus-seminorm"),
    ("lattice-core", "to_primed", "torus-adjoint"),
    ("nctorus", "q_mul", "torus-mul"),
    ("nctorus", "reorder_phase", "torus-mul"),
    ("nctorus", "adjoint", "torus-adjoint"),
    ("nctorus", "trace", "torus-adjoint"),
    ("nctorus", "l2_state", "torus-adjoint"),
    ("nctorus", "d_power", "torus-derive"),
    ("nctorus", "inner_derivation", "torus-derive"),
    ("nctorus", "apply_derivation", "torus-derive"),
    ("nctorus", "check_derivation_relation", "torus-check-derivation"),
    ("nctorus", "smooth_seminorm", "torus-seminorm"),
    ("matrep", "clock_shift", "matrep-eval"),
    ("matrep", "eval_section", "matrep-eval"),
    ("matrep", "equivariance_check", "matrep-eval"),
    ("matrep", "circle_eval", "circle-check"),
    ("matrep", "circle_check_relations", "circle-check"),
    ("heisenberg-op", "apply_Q", "weyl-check"),
    ("heisenberg-op", "apply_P", "weyl-check"),
    ("heisenberg-op", "weyl_Q", "weyl-check"),
    ("heisenberg-op", "weyl_P", "weyl-check"),
    ("heisenberg-op", "rep_lattice_measure", "rep-lattice"),
    ("heisenberg-op", "calibrate_q", "rep-lattice"),
    ("heisenberg-op", "solve_inner_generator", "solve-inner"),
    ("twisted-moyal", "twisted_conv", "twisted-conv"),
    ("twisted-moyal", "other_twisted_conv", "twisted-conv"),
    ("twisted-moyal", "gauge_iso", "twisted-conv"),
    ("twisted-moyal", "heisenberg_group_conv", "twisted-conv"),
    ("twisted-moyal", "moyal_star", "moyal-star"),
    ("twisted-moyal", "half_moyal", "moyal-star"),
    ("twisted-moyal", "fourier_bridge_error", "fourier-bridge"),
    ("twisted-moyal", "hbar_smoothness_probe", "hbar-probe"),
    ("gns", "is_positive", "gns-build"),
    ("gns", "gns_build", "gns-build"),
    ("gns", "state_action", "gns-check"),
    ("gns", "schwarz_check", "gns-check"),
];

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use clap::CommandFactory;

    use super::COVERAGE;
    use crate::Cli;

    #[test]
    fn each_operation_listed_once() {
        let mut seen = HashSet::new();
        for (module, op, _) in COVERAGE {
            assert!(seen.insert((module, op)), "{module}::{op} listed twice");
        }
    }

    #[test]
    fn each_subcommand_exists() {
        let cmd = Cli::command();
        let names: HashSet<&str> = cmd.get_subcommands().map(|c| c.get_name()).collect();
        for (_, _, sub) in COVERAGE {
            assert!(names.contains(sub), "no subcommand {sub}");
        }
    }
}
