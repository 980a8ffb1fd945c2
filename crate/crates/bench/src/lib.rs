//! Fixed workloads shared by the benchmarks.

use spinflux::{
    build_closure, build_heisenberg_chain, build_xx_chain, christandl_couplings, ClosureGraph, PauliString, PauliSum,
};

/// Engineered XX chain of `n` sites.
pub fn transfer_chain(n: usize) -> PauliSum {
    build_xx_chain(n, &christandl_couplings(n, 1.0).expect("n >= 2")).expect("valid chain")
}

/// Uniform Heisenberg chain of `n` sites.
pub fn heisenberg_chain(n: usize) -> PauliSum {
    build_heisenberg_chain(n, &vec![1.0; n - 1]).expect("valid chain")
}

/// Closure of `X_n` under `h`.
pub fn end_closure(h: &PauliSum) -> ClosureGraph {
    let n = h.num_qubits();
    let seed = PauliString::single(n, n, spinflux::Letter::X).expect("site in range");
    build_closure(h, &seed, 1 << 16).expect("closure fits")
}
