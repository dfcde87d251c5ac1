use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::foundation::{format_rational, Rational};
use crate::matroid::{bits, Matroid};

/// Fine subdivision of the Bergman fan: one cone per flag of proper nonempty flats.
#[derive(Clone, Debug)]
pub struct FanChart {
    pub matroid: Matroid,
    /// Proper nonempty flats, by rank and then by mask.
    pub flats: Vec<u64>,
    /// Strictly increasing flags, as indices into `flats`.
    pub chains: Vec<Vec<usize>>,
}

/// Builds the chart of a loopless matroid.
pub fn bergman_chart(m: &Matroid) -> Result<FanChart> {
    if m.loops() != 0 {
        return Err(Error::Precondition(format!(
            "matroid has loops {:?}; its Bergman fan is empty",
            m.labels_of(m.loops())
        )));
    }
    let lattice = m.flats();
    let flats: Vec<u64> = lattice.proper_nonempty().into_iter().map(|(f, _)| f).collect();
    let mut chains = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..flats.len()).map(|k| vec![k]).collect();
    stack.reverse();
    while let Some(chain) = stack.pop() {
        let last = flats[*chain.last().expect("nonempty")];
        for next in (0..flats.len()).rev() {
            if flats[next] != last && flats[next] & last == last {
                let mut longer = chain.clone();
                longer.push(next);
                stack.push(longer);
            }
        }
        chains.push(chain);
    }
    chains.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(FanChart { matroid: m.clone(), flats, chains })
}

impl FanChart {
    /// `−Σ_{i∈F} e_i` for a flat `F`.
    pub fn ray(&self, flat: u64) -> Vec<Rational> {
        (0..self.matroid.len())
            .map(|k| if flat >> k & 1 == 1 { -Rational::from_integer(1.into()) } else { Rational::zero() })
            .collect()
    }

    pub fn rays(&self) -> Vec<Vec<Rational>> {
        self.flats.iter().map(|&f| self.ray(f)).collect()
    }

    pub fn maximal_chains(&self) -> Vec<&Vec<usize>> {
        let top = self.chains.iter().map(Vec::len).max().unwrap_or(0);
        self.chains.iter().filter(|c| c.len() == top).collect()
    }

    pub fn chain_flats(&self, chain: &[usize]) -> Vec<u64> {
        chain.iter().map(|&k| self.flats[k]).collect()
    }
}

/// `x = −Σ_j weight_j · 1_{F_j}` for a flag of the chart with positive weights.
pub fn fan_point(chart: &FanChart, chain: &[u64], weights: &[Rational]) -> Result<Vec<Rational>> {
    if chain.len() != weights.len() {
        return Err(Error::InvalidInput(format!("{} weights for a chain of length {}", weights.len(), chain.len())));
    }
    if weights.iter().any(|w| !w.is_positive()) {
        return Err(Error::InvalidInput("weights must be positive".into()));
    }
    let known = chain.iter().all(|f| chart.flats.contains(f));
    let increasing = chain.windows(2).all(|w| w[0] != w[1] && w[0] & w[1] == w[0]);
    if !known || !increasing {
        return Err(Error::InvalidInput("chain is not a flag of proper nonempty flats".into()));
    }
    let mut x = vec![Rational::zero(); chart.matroid.len()];
    for (&f, w) in chain.iter().zip(weights) {
        for k in bits(f) {
            x[k] -= w;
        }
    }
    Ok(x)
}

#[derive(Serialize)]
struct ChartJson {
    ground: Vec<String>,
    rays: Vec<RayJson>,
    maximal_cones: Vec<Vec<usize>>,
    cone_count: usize,
}

#[derive(Serialize)]
struct RayJson {
    flat: Vec<String>,
    generator: Vec<String>,
}

impl Serialize for FanChart {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ChartJson {
            ground: self.matroid.ground().to_vec(),
            rays: self
                .flats
                .iter()
                .map(|&f| RayJson {
                    flat: self.matroid.labels_of(f),
                    generator: self.ray(f).iter().map(format_rational).collect(),
                })
                .collect(),
            maximal_cones: self.maximal_chains().into_iter().cloned().collect(),
            cone_count: self.chains.len(),
        }
        .serialize(s)
    }
}
