mod ergotropy_basics {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/ergotropy_basics.rs"));
}
mod distances {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/distances.rs"));
}
mod random_ensembles {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/random_ensembles.rs"));
}
mod average_sweep {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/average_sweep.rs"));
}
mod tail_exponents {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/tail_exponents.rs"));
}
mod verify_inequalities {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/verify_inequalities.rs"));
}
mod local_hamiltonian {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/local_hamiltonian.rs"));
}
mod continuity_bounds {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/continuity_bounds.rs"));
}

#[test]
fn ergotropy_basics_runs() {
    ergotropy_basics::run_example().expect("ergotropy example should run");
}

#[test]
fn distances_runs() {
    distances::run_example().expect("distances example should run");
}

#[test]
fn random_ensembles_runs() {
    random_ensembles::run_example().expect("ensembles example should run");
}

#[test]
fn average_sweep_runs() {
    average_sweep::run_example().expect("sweep example should run");
}

#[test]
fn tail_exponents_runs() {
    tail_exponents::run_example().expect("tail example should run");
}

#[test]
fn verify_inequalities_runs() {
    verify_inequalities::run_example().expect("verification example should run");
}

#[test]
fn local_hamiltonian_runs() {
    local_hamiltonian::run_example().expect("k-local example should run");
}

#[test]
fn continuity_bounds_runs() {
    continuity_bounds::run_example().expect("bounds example should run");
}
