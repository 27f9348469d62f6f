//! Finite prefixes of random mass-partitions.
//!
//! A [`MassPartition`] stores the first atoms of a (possibly infinite)
//! partition of unit mass together with the mass that was not realised.
//! The residual is kept explicit instead of renormalising the prefix.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::randkit::RngStream;

/// Tolerance on `sum(atoms) + residual == 1` for stored partitions.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// Residual above which an exact size-biased permutation is refused.
pub const SIZE_BIAS_RESIDUAL_LIMIT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    SizeBiased,
    Nonincreasing,
    Construction,
}

impl Order {
    pub fn as_str(self) -> &'static str {
        match self {
            Order::SizeBiased => "size_biased",
            Order::Nonincreasing => "nonincreasing",
            Order::Construction => "construction",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "size_biased" => Ok(Order::SizeBiased),
            "nonincreasing" => Ok(Order::Nonincreasing),
            "construction" => Ok(Order::Construction),
            other => Err(Error::Parse(format!("unknown order tag `{other}`"))),
        }
    }
}

/// How the unrealised tail of a partition was accounted for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Closure {
    /// The residual is an exact draw of the tail mass; the prefix has the
    /// exact law of the first atoms.
    Exact,
    /// The residual is a conditional-mean estimate of the tail mass.
    Estimated,
    /// The tail was dropped and the prefix renormalised; carries truncation bias.
    Truncated,
}

impl Closure {
    pub fn as_str(self) -> &'static str {
        match self {
            Closure::Exact => "exact",
            Closure::Estimated => "estimated",
            Closure::Truncated => "truncated",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Closure::Exact),
            "estimated" => Ok(Closure::Estimated),
            "truncated" => Ok(Closure::Truncated),
            other => Err(Error::Parse(format!("unknown closure tag `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassPartition {
    atoms: Vec<f64>,
    residual: f64,
    order: Order,
    closure: Closure,
}

/// Neumaier-compensated sum in iteration order.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

impl MassPartition {
    /// Builds a partition after checking every invariant.
    pub fn new(atoms: Vec<f64>, residual: f64, order: Order, closure: Closure) -> Result<Self> {
        if let Some(i) = atoms.iter().position(|a| !(a.is_finite() && *a > 0.0)) {
            return Err(Error::InvalidPartition(format!(
                "atom {i} is not finite and positive"
            )));
        }
        if !(residual.is_finite() && residual >= 0.0) {
            return Err(Error::InvalidPartition(format!(
                "residual {residual} is not finite and nonnegative"
            )));
        }
        let total = compensated_sum(atoms.iter().copied().chain([residual]));
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidPartition(format!(
                "atoms and residual sum to {total}"
            )));
        }
        if order == Order::Nonincreasing && atoms.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(
                "atoms tagged nonincreasing are not sorted".into(),
            ));
        }
        Ok(Self::from_parts(atoms, residual, order, closure))
    }

    /// Internal constructor for samplers that satisfy the invariants by
    /// construction.
    pub(crate) fn from_parts(atoms: Vec<f64>, residual: f64, order: Order, closure: Closure) -> Self {
        debug_assert!(atoms.iter().all(|a| a.is_finite() && *a >= 0.0));
        debug_assert!(residual >= 0.0);
        Self {
            atoms,
            residual,
            order,
            closure,
        }
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    /// The `i`-th atom (0-based), if stored.
    pub fn atom(&self, i: usize) -> Option<f64> {
        self.atoms.get(i).copied()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn closure(&self) -> Closure {
        self.closure
    }

    /// Sum of the stored atoms.
    pub fn prefix_mass(&self) -> f64 {
        compensated_sum(self.atoms.iter().copied())
    }

    /// Sum of the stored atoms plus the residual.
    pub fn total_mass(&self) -> f64 {
        compensated_sum(self.atoms.iter().copied().chain([self.residual]))
    }

    pub fn into_atoms(self) -> Vec<f64> {
        self.atoms
    }

    /// CSV form: a `#` header line with the order, closure and residual,
    /// a column header, then one `index,weight` row per atom.
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# order={} closure={} residual={}\nindex,weight\n",
            self.order.as_str(),
            self.closure.as_str(),
            self.residual
        );
        for (i, a) in self.atoms.iter().enumerate() {
            out.push_str(&format!("{},{}\n", i + 1, a));
        }
        out
    }

    /// Parses the output of [`MassPartition::to_csv`], re-checking invariants.
    pub fn from_csv(input: &str) -> Result<Self> {
        let (header, body) = input
            .split_once('\n')
            .ok_or_else(|| Error::Parse("missing header line".into()))?;
        let header = header
            .trim_end_matches('\r')
            .strip_prefix('#')
            .ok_or_else(|| Error::Parse("header must start with `#`".into()))?;
        let mut order = None;
        let mut closure = None;
        let mut residual = None;
        for field in header.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("malformed header field `{field}`")))?;
            match key {
                "order" => order = Some(Order::parse(value)?),
                "closure" => closure = Some(Closure::parse(value)?),
                "residual" => {
                    residual = Some(value.parse::<f64>().map_err(|e| {
                        Error::Parse(format!("residual `{value}`: {e}"))
                    })?)
                }
                _ => {}
            }
        }
        let order = order.ok_or_else(|| Error::Parse("header lacks order".into()))?;
        let closure = closure.unwrap_or(Closure::Exact);
        let residual = residual.ok_or_else(|| Error::Parse("header lacks residual".into()))?;

        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(body.as_bytes());
        let mut atoms = Vec::new();
        for (row, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::Parse(e.to_string()))?;
            if record.len() != 2 {
                return Err(Error::Parse(format!("row {} has {} fields", row + 1, record.len())));
            }
            let index: usize = record[0]
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("row {}: index: {e}", row + 1)))?;
            if index != row + 1 {
                return Err(Error::Parse(format!("row {} has index {index}", row + 1)));
            }
            let weight: f64 = record[1]
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("row {}: weight: {e}", row + 1)))?;
            atoms.push(weight);
        }
        Self::new(atoms, residual, order, closure)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("partition serialization cannot fail")
    }

    /// Parses `{"atoms": [...], "residual": r, "order": "...", "closure": "..."}`,
    /// re-checking invariants.
    pub fn from_json(input: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            atoms: Vec<f64>,
            residual: f64,
            order: Order,
            #[serde(default = "default_closure")]
            closure: Closure,
        }
        fn default_closure() -> Closure {
            Closure::Exact
        }
        let raw: Raw = serde_json::from_str(input).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(raw.atoms, raw.residual, raw.order, raw.closure)
    }
}

/// A point of a truncated Poisson construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub time: Option<f64>,
    pub size: f64,
}

/// Finite collection of (time, size) or size-only points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkedPointSet {
    points: Vec<Point>,
    /// Cutoff of the construction (e.g. the last arrival time used), if any.
    truncation_level: Option<f64>,
    /// Conditional mean of the omitted size mass beyond the cutoff.
    tail_mean: f64,
}

impl MarkedPointSet {
    pub fn new(points: Vec<Point>, truncation_level: Option<f64>, tail_mean: f64) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if !(p.size.is_finite() && p.size > 0.0) {
                return Err(Error::NonFiniteInput(i));
            }
            if let Some(t) = p.time {
                if !(t.is_finite() && t >= 0.0) {
                    return Err(Error::NonFiniteInput(i));
                }
            }
        }
        let times: Vec<f64> = points.iter().filter_map(|p| p.time).collect();
        if times.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidPartition("point times are not nondecreasing".into()));
        }
        if !(tail_mean.is_finite() && tail_mean >= 0.0) {
            return Err(Error::InvalidPartition(format!("tail mean {tail_mean} is invalid")));
        }
        Ok(Self {
            points,
            truncation_level,
            tail_mean,
        })
    }

    /// Size-only points with no truncation.
    pub fn from_sizes(sizes: &[f64]) -> Result<Self> {
        Self::new(
            sizes.iter().map(|&size| Point { time: None, size }).collect(),
            None,
            0.0,
        )
    }

    pub(crate) fn from_parts(points: Vec<Point>, truncation_level: Option<f64>, tail_mean: f64) -> Self {
        Self {
            points,
            truncation_level,
            tail_mean,
        }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn sizes(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.size)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn truncation_level(&self) -> Option<f64> {
        self.truncation_level
    }

    pub fn tail_mean(&self) -> f64 {
        self.tail_mean
    }

    pub fn size_sum(&self) -> f64 {
        compensated_sum(self.sizes())
    }

    /// Multiplies every size (and the tail estimate) by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            points: self
                .points
                .iter()
                .map(|p| Point {
                    time: p.time,
                    size: p.size * factor,
                })
                .collect(),
            truncation_level: self.truncation_level,
            tail_mean: self.tail_mean * factor,
        }
    }
}

fn check_points(points: &MarkedPointSet) -> Result<()> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(i) = points
        .points
        .iter()
        .position(|p| !(p.size.is_finite() && p.size > 0.0))
    {
        return Err(Error::NonFiniteInput(i));
    }
    Ok(())
}

/// Self-normalization: divides every size by the total.
///
/// The output has one atom per input point, in input order, and zero
/// residual; any tail estimate carried by `points` is ignored.
pub fn normalize(points: &MarkedPointSet) -> Result<MassPartition> {
    check_points(points)?;
    let total = points.size_sum();
    let atoms = points.sizes().map(|s| s / total).collect();
    Ok(MassPartition::from_parts(atoms, 0.0, Order::Construction, Closure::Exact))
}

/// Self-normalization that keeps the point set's tail estimate as residual
/// mass: atoms are `size / (sum + tail)` and the residual is
/// `tail / (sum + tail)`.
pub fn normalize_with_tail(points: &MarkedPointSet) -> Result<MassPartition> {
    check_points(points)?;
    let tail = points.tail_mean;
    let total = points.size_sum() + tail;
    let atoms = points.sizes().map(|s| s / total).collect();
    let closure = if tail > 0.0 {
        Closure::Estimated
    } else {
        Closure::Exact
    };
    Ok(MassPartition::from_parts(atoms, tail / total, Order::Construction, closure))
}

/// Picks an index with probability proportional to `weights[i]` among
/// `alive`, or `None` if the draw lands in the extra `tail` mass.
fn pick_proportional(weights: &[f64], alive: &[usize], tail: f64, stream: &mut RngStream) -> Option<usize> {
    let total = compensated_sum(alive.iter().map(|&i| weights[i])) + tail;
    let target = stream.uniform() * total;
    let mut acc = 0.0;
    for (pos, &i) in alive.iter().enumerate() {
        acc += weights[i];
        if target < acc {
            return Some(pos);
        }
    }
    if tail > 0.0 && target >= acc {
        None
    } else {
        // Rounding pushed the target past the final cumulative sum.
        Some(alive.len() - 1)
    }
}

/// Size-biased random reordering of the atoms.
///
/// Atoms are drawn one by one without replacement, each with probability
/// proportional to its weight among those remaining. The atom multiset is
/// preserved bit for bit. Refuses partitions whose residual is not
/// negligible, since the unseen tail would have to take part in the draws.
pub fn size_biased_permutation(p: &MassPartition, stream: &mut RngStream) -> Result<MassPartition> {
    if p.residual >= SIZE_BIAS_RESIDUAL_LIMIT {
        return Err(Error::ResidualTooLarge(p.residual));
    }
    let mut alive: Vec<usize> = (0..p.atoms.len()).collect();
    let mut atoms = Vec::with_capacity(p.atoms.len());
    while !alive.is_empty() {
        let pos = pick_proportional(&p.atoms, &alive, 0.0, stream)
            .expect("no tail mass, a pick always succeeds");
        atoms.push(p.atoms[alive.remove(pos)]);
    }
    Ok(MassPartition::from_parts(atoms, p.residual, Order::SizeBiased, p.closure))
}

/// The first `m` size-biased picks from a partition that may carry residual
/// mass.
///
/// The residual takes part in every draw as one block of unseen atoms. If a
/// draw lands in it the procedure stops, so the result may hold fewer than
/// `m` atoms; the returned residual is everything not picked. Consumers
/// treat a missing pick as an atom of negligible size.
pub fn size_biased_prefix(p: &MassPartition, m: usize, stream: &mut RngStream) -> MassPartition {
    let mut alive: Vec<usize> = (0..p.atoms.len()).collect();
    let mut atoms = Vec::with_capacity(m.min(p.atoms.len()));
    while atoms.len() < m && !alive.is_empty() {
        match pick_proportional(&p.atoms, &alive, p.residual, stream) {
            Some(pos) => atoms.push(p.atoms[alive.remove(pos)]),
            None => break,
        }
    }
    let rest = compensated_sum(alive.iter().map(|&i| p.atoms[i]).chain([p.residual]));
    MassPartition::from_parts(atoms, rest, Order::SizeBiased, p.closure)
}

/// Sorts atoms in nonincreasing order; the residual is untouched.
pub fn sort_nonincreasing(p: &MassPartition) -> MassPartition {
    let mut atoms = p.atoms.clone();
    atoms.sort_by(|a, b| b.total_cmp(a));
    MassPartition::from_parts(atoms, p.residual, Order::Nonincreasing, p.closure)
}
