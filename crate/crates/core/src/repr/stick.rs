use super::{require_k, RamParams};
use crate::error::Result;
use crate::partition::{Closure, MassPartition, Order};
use crate::randkit::{gamma_unit, RngStream};

/// Lazy stick-breaking: each call to [`StickBreaker::next_atom`] draws
/// `Y_n ~ beta(c, a_n)` and returns `Y_n * prod_{j<n} (1 - Y_j)`.
pub struct StickBreaker<'a> {
    params: RamParams,
    n: usize,
    rest: f64,
    stream: &'a mut RngStream,
}

impl<'a> StickBreaker<'a> {
    pub fn new(params: RamParams, stream: &'a mut RngStream) -> Self {
        Self {
            params,
            n: 0,
            rest: 1.0,
            stream,
        }
    }

    pub fn next_atom(&mut self) -> f64 {
        self.n += 1;
        let gc = gamma_unit(self.stream, self.params.c());
        let ga = gamma_unit(self.stream, self.params.a(self.n));
        let total = gc + ga;
        let atom = self.rest * (gc / total);
        // 1 - Y from the complementary gamma keeps precision when Y is near 1.
        self.rest *= ga / total;
        atom
    }

    /// Mass not yet assigned to any atom.
    pub fn residual(&self) -> f64 {
        self.rest
    }

    /// The underlying stream, for interleaving other draws with the stick.
    pub fn stream_mut(&mut self) -> &mut RngStream {
        self.stream
    }

    /// Number of atoms drawn so far.
    pub fn drawn(&self) -> usize {
        self.n
    }
}

impl Iterator for StickBreaker<'_> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        Some(self.next_atom())
    }
}

/// First `k` size-biased atoms of `RAM(alpha, a1, c)` by stick-breaking.
///
/// The prefix is exact: the residual is the product of the `k` remaining
/// stick fractions, not an estimate.
pub fn sample_ram_stick(params: RamParams, k: usize, stream: &mut RngStream) -> Result<MassPartition> {
    require_k(k)?;
    let mut stick = StickBreaker::new(params, stream);
    let atoms: Vec<f64> = (&mut stick).take(k).collect();
    let residual = stick.residual();
    Ok(MassPartition::from_parts(atoms, residual, Order::SizeBiased, Closure::Exact))
}
