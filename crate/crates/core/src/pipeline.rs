//! End-to-end runs shared by the command-line front end and the acceptance suite.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::foundation::{colex_subsets, Rational, Subset};
use crate::linespace::{
    gale_report, genericity_report, matrix_u_of, matrix_v, reduced_w, GaleReport, GenericityReport, SubspaceInput,
    UMatrix, VMatrix, WMatrix,
};
use crate::matroid::{matroid_equal_by_labels, matroid_of_lines, matroid_of_points, Matroid};
use crate::polyrel::{
    in2pl_tuples, move_b_tuples, saturation_certificate, verify_in2pl_with, verify_move_b_with, Fault,
};
use crate::tropical::{
    bergman_chart, fan_point, in_trop_linear_space, matroid_plucker, plucker_from_labeled, trop_incidence_check,
    trop_plucker_check, TropPluecker, TropValue,
};

/// The matroid of `L(X)` computed three independent ways.
#[derive(Clone, Debug, Serialize)]
pub struct LineMatroids {
    /// Column matroid of a kernel basis of `U`.
    pub kernel: Matroid,
    /// Column matroid of `V`.
    pub v: Matroid,
    /// Dependencies among the lines `ℓ_J` of the arrangement.
    pub lines: Matroid,
}

impl LineMatroids {
    pub fn all_equal(&self) -> bool {
        self.kernel.bases() == self.v.bases()
            && self.v.bases() == self.lines.bases()
            && matroid_equal_by_labels(&self.kernel, &self.v)
            && matroid_equal_by_labels(&self.v, &self.lines)
    }
}

#[derive(Clone, Debug)]
pub struct LinesAnalysis {
    pub w: WMatrix,
    pub u: UMatrix,
    pub v: VMatrix,
    pub matroids: LineMatroids,
    pub gale: GaleReport,
    pub genericity: GenericityReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct LinesReport {
    pub n: usize,
    pub d: usize,
    pub relabeled: bool,
    pub permutation: Vec<usize>,
    pub rank: usize,
    pub generic: bool,
    pub three_way_equality: bool,
    pub gale_duality: bool,
    pub gale: GaleReport,
    pub vanishing_minor_columns: Vec<Vec<String>>,
}

fn subset_labels(n: usize, d: usize) -> Vec<String> {
    colex_subsets(n, d).into_iter().map(Subset::label).collect()
}

pub fn analyze_lines(x: &SubspaceInput) -> Result<LinesAnalysis> {
    let w = reduced_w(x);
    let u = matrix_u_of(&w)?;
    let v = matrix_v(&w);
    let labels = subset_labels(x.n(), x.d());
    let matroids = LineMatroids {
        kernel: matroid_of_points(&u.entries.kernel_basis(), labels.clone())?,
        v: matroid_of_points(&v.entries, labels)?,
        lines: matroid_of_lines(&w)?,
    };
    let gale = gale_report(&u, &v)?;
    let genericity = genericity_report(x)?;
    Ok(LinesAnalysis { w, u, v, matroids, gale, genericity })
}

impl LinesAnalysis {
    pub fn report(&self) -> LinesReport {
        LinesReport {
            n: self.w.n(),
            d: self.w.d(),
            relabeled: self.w.is_relabeled(),
            permutation: self.w.permutation.clone(),
            rank: self.matroids.v.rank(),
            generic: self.genericity.is_generic,
            three_way_equality: self.matroids.all_equal(),
            gale_duality: self.gale.holds(),
            gale: self.gale.clone(),
            vanishing_minor_columns: self.genericity.vanishing_minor_columns.clone(),
        }
    }

    pub fn verified(&self) -> bool {
        self.matroids.all_equal() && self.gale.holds()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityFailure {
    pub identity: &'static str,
    #[serde(rename = "A")]
    pub a: Subset,
    #[serde(rename = "B")]
    pub b: Subset,
    #[serde(rename = "C")]
    pub c: Subset,
    pub element: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub n: usize,
    pub d: usize,
    pub in2pl_checked: usize,
    pub move_b_checked: usize,
    pub certificates_checked: usize,
    pub max_certificate_exponent: u32,
    pub failures: Vec<IdentityFailure>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Both exchange identities on every admissible tuple, then a replayed certificate
/// for every `(A, B)` against `C = [d+1]`.
pub fn identity_suite(n: usize, d: usize, fault: Fault) -> Result<IdentityReport> {
    let mut failures = Vec::new();
    let in2pl = in2pl_tuples(n, d);
    for &(a, b, c, e) in &in2pl {
        if !verify_in2pl_with(a, b, c, e, fault)?.holds {
            failures.push(IdentityFailure { identity: "in2pl", a, b, c, element: Some(e) });
        }
    }
    let move_b = move_b_tuples(n, d);
    for &(a, b, c, e) in &move_b {
        if !verify_move_b_with(a, b, c, e, fault)?.holds {
            failures.push(IdentityFailure { identity: "moveB", a, b, c, element: Some(e) });
        }
    }
    let c = Subset::full(d + 1);
    let mut certificates_checked = 0;
    let mut max_certificate_exponent = 0;
    for a in colex_subsets(n, d - 1) {
        for b in colex_subsets(n, d + 1) {
            let cert = saturation_certificate(a, b, c)?;
            certificates_checked += 1;
            max_certificate_exponent = max_certificate_exponent.max(cert.exponent);
            if !cert.replay()? {
                failures.push(IdentityFailure { identity: "certificate", a, b, c, element: None });
            }
        }
    }
    Ok(IdentityReport {
        n,
        d,
        in2pl_checked: in2pl.len(),
        move_b_checked: move_b.len(),
        certificates_checked,
        max_certificate_exponent,
        failures,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CoherenceReport {
    pub samples: usize,
    pub plucker_failures: usize,
    pub incidence_failures: usize,
    pub membership_failures: usize,
    pub random_vectors: usize,
    pub random_rejections: usize,
}

impl CoherenceReport {
    pub fn holds(&self) -> bool {
        self.plucker_failures == 0
            && self.incidence_failures == 0
            && self.membership_failures == 0
            && self.random_rejections > 0
    }
}

/// Samples points of the Bergman fan of the matroid of `L(X)` and checks them against the
/// tropical Plücker relations and the incidence relations with `q ≡ 0`; also counts how
/// many random integer vectors in `[−3, 3]` fall outside the fan.
pub fn tropical_coherence(x: &SubspaceInput, samples: usize, seed: u64) -> Result<CoherenceReport> {
    let (n, d) = (x.n(), x.d());
    let m = matroid_of_lines(&reduced_w(x))?;
    let chart = bergman_chart(&m)?;
    let valuation = matroid_plucker(&m)?;
    let q = TropPluecker::constant(n, d + 1, TropValue::zero())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CoherenceReport {
        samples,
        plucker_failures: 0,
        incidence_failures: 0,
        membership_failures: 0,
        random_vectors: samples,
        random_rejections: 0,
    };
    for _ in 0..samples {
        let chain = chart.chain_flats(chart.chains.choose(&mut rng).expect("rank ≥ 2 has flats"));
        let weights: Vec<Rational> =
            chain.iter().map(|_| Rational::new(rng.gen_range(1..=12).into(), rng.gen_range(1..=4).into())).collect();
        let point: Vec<TropValue> = fan_point(&chart, &chain, &weights)?.into_iter().map(TropValue::Finite).collect();
        let p = plucker_from_labeled(m.ground(), &point, n)?;
        report.plucker_failures += usize::from(!trop_plucker_check(&p));
        report.incidence_failures += usize::from(!trop_incidence_check(&p, &q)?);
        report.membership_failures += usize::from(!in_trop_linear_space(&valuation, &point)?);
    }
    for _ in 0..samples {
        let point: Vec<TropValue> = (0..m.len()).map(|_| TropValue::int(rng.gen_range(-3..=3))).collect();
        report.random_rejections += usize::from(!in_trop_linear_space(&valuation, &point)?);
    }
    Ok(report)
}
