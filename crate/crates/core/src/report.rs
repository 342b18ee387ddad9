//! Structured inequality reports, the bound-id catalog, and the CSV / JSON
//! report schema shared by the batch verifier and the CLI.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::{Serialize, Serializer};

/// Relative satisfaction tolerance: `lhs <= rhs + tol * max(1, |rhs|)`.
pub const SATISFACTION_TOL: f64 = 1e-9;

macro_rules! bound_catalog {
    ($($variant:ident => $id:literal, $statement:literal;)*) => {
        /// Every inequality the crate can certify.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum BoundId {
            $($variant,)*
        }

        impl BoundId {
            pub const ALL: &'static [BoundId] = &[$(BoundId::$variant,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(BoundId::$variant => $id,)*
                }
            }

            /// The inequality in plain text, `lhs <= rhs`.
            pub fn statement(self) -> &'static str {
                match self {
                    $(BoundId::$variant => $statement,)*
                }
            }

            pub fn parse(s: &str) -> Option<BoundId> {
                match s {
                    $($id => Some(BoundId::$variant),)*
                    _ => None,
                }
            }
        }
    };
}

bound_catalog! {
    TraceDuality => "trace-duality",
        "|Tr[AB]| <= ||A||_1 ||B||_inf (<= ||A||_1 ||B||_1)";
    NormMonotonicity => "norm-monotonicity",
        "||A||_q <= ||A||_p for 1 <= p <= q <= inf";
    TraceSubmultiplicativity => "trace-submultiplicativity",
        "||AB||_1 <= min(||A||_inf ||B||_1, ||A||_1 ||B||_inf)";
    FuchsVanDeGraaf => "fuchs-van-de-graaf",
        "1 - F(rho,sigma) <= ||rho-sigma||_1 / 2 <= sqrt(1 - F^2)";
    SldNorm => "sld-norm",
        "||L_rho||_inf <= ||d rho||_inf / lambda_min(rho)";
    ExpDifference => "exp-difference",
        "||e^{-s rho} - e^{-s sigma}||_inf <= (e^{-s l_sigma} - e^{-s l_rho}) / (l_rho - l_sigma) ||rho-sigma||_1";
    SldContinuityTight => "sld-continuity-tight",
        "||L_rho - L_sigma||_inf <= ||d sigma|| (2 l_rho + D) D / (l_rho l_sigma (l_rho + l_sigma)) + ||d rho - d sigma|| / l_rho";
    SldContinuityLoose => "sld-continuity-loose",
        "||L_rho - L_sigma||_inf <= nu ||d sigma|| (2 + D) D / 2 + ||d rho - d sigma|| / l_rho, nu = (l_rho l_sigma)^-4";
    SldContinuityDominance => "sld-continuity-dominance",
        "rhs(sld-continuity-tight) <= rhs(sld-continuity-loose)";
    QfiContinuityChain => "qfi-continuity-chain",
        "|F(rho) - F(sigma)| <= ||dL|| (||dL|| + 2 ||L_sigma||) + ||L_rho||^2 D";
    QfiContinuity => "qfi-continuity",
        "|F(rho) - F(sigma)| <= sum_m f_m D^m + sum_n g_n ||d rho - d sigma||_inf^n";
    UnitarySldTight => "unitary-sld-tight",
        "||L_rho - L_sigma|| <= 2 ||H|| D (l_sigma (l_rho + l_sigma) + 2 l_rho + D) / (l_rho l_sigma (l_rho + l_sigma))";
    UnitarySldLoose => "unitary-sld-loose",
        "||L_rho - L_sigma|| <= nu ||H|| D (4 + D)";
    ExtendedConvexity => "extended-convexity",
        "F(sum_a p_a rho_a) <= F_C({p_a}) + sum_a p_a F(rho_a)";
    MeasurementMonotonicity => "measurement-monotonicity",
        "F_C(Tr[rho Pi_i]) <= F(rho) for every POVM";
    QfiAdditivity => "qfi-additivity",
        "|F(rho1 (x) rho2) - F(rho1) - F(rho2)| <= 1e-8";
    KLocalNorm => "klocal-norm",
        "||H||_inf <= C(N,k) max_j ||H_j||_inf";
    EgTraceDistance => "eg-trace-distance",
        "||rho - sigma||_1 <= 2 sqrt(1 - F^2(rho, sigma)) for a separable sigma";
    QfiEntanglementGraded => "qfi-entanglement-graded",
        "F(rho) <= F(sigma*) + sum_m 2^m f_m E_G^{m/2} + sum_n g_n ||d rho - d sigma*||^n";
    QfiEntanglement => "qfi-entanglement",
        "F(rho) <= F(sigma*) + 16 (sum_m f_m) sqrt(E_G) + sum_n g_n ||d rho - d sigma*||^n";
    UnitarySldEntanglement => "unitary-sld-entanglement",
        "||L_rho - L_sigma*||_inf <= 12 nu* ||H|| sqrt(E_G)";
    ScalingSeparable => "scaling-separable",
        "F(rho) <= F(sigma*) + 208 nu^2 ||H||^2 sqrt(E_G)";
    ScalingLinear => "scaling-linear",
        "F(rho) <= alpha_CQ N + 208 nu^2 ||H||^2 sqrt(E_G)";
    ScalingKLocal => "scaling-klocal",
        "F(rho) <= alpha_CQ N + alpha_QQ C(N,k)^2 nu^2 sqrt(E_G)";
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for BoundId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Outcome of evaluating one inequality `lhs <= rhs` on one instance.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub bound_id: BoundId,
    #[serde(serialize_with = "ser_f64")]
    pub lhs: f64,
    #[serde(serialize_with = "ser_f64")]
    pub rhs: f64,
    /// `rhs - lhs` (for two-sided reports, the smaller of the two margins).
    #[serde(serialize_with = "ser_f64")]
    pub slack: f64,
    pub satisfied: bool,
    #[serde(serialize_with = "ser_context")]
    pub context: BTreeMap<String, f64>,
}

impl BoundReport {
    pub fn new(bound_id: BoundId, lhs: f64, rhs: f64) -> Self {
        Self::with_tolerance(bound_id, lhs, rhs, SATISFACTION_TOL)
    }

    pub fn with_tolerance(bound_id: BoundId, lhs: f64, rhs: f64, rel_tol: f64) -> Self {
        let mut context = BTreeMap::new();
        if rhs == f64::INFINITY {
            context.insert("rhs_infinite".to_string(), 1.0);
        }
        Self {
            bound_id,
            lhs,
            rhs,
            slack: rhs - lhs,
            satisfied: holds(lhs, rhs, rel_tol),
            context,
        }
    }

    /// `lower <= value <= upper`, both with the relative tolerance.
    pub fn two_sided(bound_id: BoundId, lower: f64, value: f64, upper: f64, rel_tol: f64) -> Self {
        let mut r = Self::with_tolerance(bound_id, value, upper, rel_tol);
        let lower_ok = holds(lower, value, rel_tol);
        r.satisfied &= lower_ok;
        r.slack = r.slack.min(value - lower);
        r.context.insert("lower".to_string(), lower);
        r
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.context.insert(key.to_string(), value);
        self
    }

    pub fn ctx(&self, key: &str) -> Option<f64> {
        self.context.get(key).copied()
    }

    /// Recomputes `satisfied` with a different relative tolerance.
    pub fn retolerate(&mut self, rel_tol: f64) {
        let upper = holds(self.lhs, self.rhs, rel_tol);
        let lower = self.ctx("lower").is_none_or(|l| holds(l, self.lhs, rel_tol));
        self.satisfied = upper && lower;
    }
}

fn holds(lhs: f64, rhs: f64, rel_tol: f64) -> bool {
    if lhs.is_nan() || rhs.is_nan() {
        return false;
    }
    if rhs == f64::INFINITY {
        return true;
    }
    lhs <= rhs + rel_tol * rhs.abs().max(1.0)
}

/// Shortest round-trip decimal, locale independent. Exponent form outside
/// `[1e-5, 1e16)`; `inf`, `-inf`, `nan` for non-finite values.
pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn ser_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_str(&format_f64(*x))
    }
}

fn ser_context<S: Serializer>(m: &BTreeMap<String, f64>, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        if v.is_finite() {
            map.serialize_entry(k, v)?;
        } else {
            map.serialize_entry(k, &format_f64(*v))?;
        }
    }
    map.end()
}

/// One report tagged with the sample that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub sample: u64,
    pub seed: u64,
    pub dim: usize,
    #[serde(flatten)]
    pub report: BoundReport,
}

pub const CSV_HEADER: &str = "bound_id,seed,dim,lhs,rhs,slack,satisfied,sample,context";

impl ReportRow {
    /// CSV line (no trailing newline). Context is `key=value` pairs joined by `;`.
    pub fn csv_line(&self) -> String {
        let r = &self.report;
        let mut line = String::with_capacity(160);
        let _ = write!(
            line,
            "{},{},{},{},{},{},{},{},",
            r.bound_id,
            self.seed,
            self.dim,
            format_f64(r.lhs),
            format_f64(r.rhs),
            format_f64(r.slack),
            r.satisfied,
            self.sample
        );
        for (i, (k, v)) in r.context.iter().enumerate() {
            if i > 0 {
                line.push(';');
            }
            let _ = write!(line, "{k}={}", format_f64(*v));
        }
        line
    }
}

/// Writes the header and every row.
pub fn write_csv<W: std::io::Write>(mut w: W, rows: &[ReportRow]) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(w, "{}", row.csv_line())?;
    }
    Ok(())
}

/// Per-bound statistics over a batch.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BoundSummary {
    pub count: usize,
    pub violations: usize,
    #[serde(serialize_with = "ser_f64")]
    pub min_slack: f64,
    /// Slack quantiles at 0, 5, 50, 95, 100 percent.
    pub slack_quantiles: BTreeMap<String, SerF64>,
    /// Counts keyed by `floor(log10(slack))`, clamped to `[-12, 60]`;
    /// non-positive slack is counted under `"nonpositive"`.
    pub slack_log10_histogram: BTreeMap<String, usize>,
}

/// `f64` that serializes non-finite values as strings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SerF64(pub f64);

impl Serialize for SerF64 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ser_f64(&self.0, s)
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Default)]
pub struct Summary {
    pub total_reports: usize,
    pub total_violations: usize,
    pub bounds: BTreeMap<String, BoundSummary>,
}

impl Summary {
    /// Summary covering `expected` bound ids even when they produced no rows.
    pub fn from_rows(rows: &[ReportRow], expected: &[BoundId]) -> Self {
        let mut grouped: BTreeMap<String, Vec<&BoundReport>> = BTreeMap::new();
        for id in expected {
            grouped.entry(id.as_str().to_string()).or_default();
        }
        for row in rows {
            grouped.entry(row.report.bound_id.as_str().to_string()).or_default().push(&row.report);
        }
        let mut bounds = BTreeMap::new();
        let mut total_violations = 0;
        for (id, reports) in grouped {
            let s = summarize(&reports);
            total_violations += s.violations;
            bounds.insert(id, s);
        }
        Summary { total_reports: rows.len(), total_violations, bounds }
    }
}

fn summarize(reports: &[&BoundReport]) -> BoundSummary {
    let mut slacks: Vec<f64> = reports.iter().map(|r| r.slack).collect();
    slacks.sort_by(f64::total_cmp);
    let violations = reports.iter().filter(|r| !r.satisfied).count();
    let min_slack = slacks.first().copied().unwrap_or(f64::INFINITY);
    let mut slack_quantiles = BTreeMap::new();
    if !slacks.is_empty() {
        for (name, q) in [("p000", 0.0), ("p005", 0.05), ("p050", 0.5), ("p095", 0.95), ("p100", 1.0)] {
            let idx = ((slacks.len() - 1) as f64 * q).round() as usize;
            slack_quantiles.insert(name.to_string(), SerF64(slacks[idx]));
        }
    }
    let mut slack_log10_histogram = BTreeMap::new();
    for &s in &slacks {
        let key = if s.is_nan() {
            "nan".to_string()
        } else if s <= 0.0 {
            "nonpositive".to_string()
        } else if s.is_infinite() {
            "inf".to_string()
        } else {
            let e = s.log10().floor().clamp(-12.0, 60.0) as i64;
            format!("{e:+03}")
        };
        *slack_log10_histogram.entry(key).or_insert(0) += 1;
    }
    BoundSummary { count: reports.len(), violations, min_slack, slack_quantiles, slack_log10_histogram }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_round_trips() {
        for &id in BoundId::ALL {
            assert_eq!(BoundId::parse(id.as_str()), Some(id));
            assert!(!id.statement().is_empty());
        }
        assert_eq!(BoundId::parse("nope"), None);
    }

    #[test]
    fn satisfaction_tolerance_is_relative() {
        assert!(BoundReport::new(BoundId::SldNorm, 1.0 + 5e-10, 1.0).satisfied);
        assert!(!BoundReport::new(BoundId::SldNorm, 1.0 + 5e-9, 1.0).satisfied);
        assert!(BoundReport::new(BoundId::SldNorm, 1e6 + 1e-4, 1e6).satisfied);
        assert!(!BoundReport::new(BoundId::SldNorm, f64::NAN, 1.0).satisfied);
        let r = BoundReport::new(BoundId::SldNorm, 3.0, f64::INFINITY);
        assert!(r.satisfied);
        assert_eq!(r.ctx("rhs_infinite"), Some(1.0));
        assert_eq!(r.slack, f64::INFINITY);
    }

    #[test]
    fn two_sided_checks_both_ends() {
        assert!(BoundReport::two_sided(BoundId::FuchsVanDeGraaf, 0.0, 0.0, 0.0, 1e-9).satisfied);
        assert!(!BoundReport::two_sided(BoundId::FuchsVanDeGraaf, 0.5, 0.2, 0.9, 1e-9).satisfied);
        assert!(!BoundReport::two_sided(BoundId::FuchsVanDeGraaf, 0.1, 0.95, 0.9, 1e-9).satisfied);
    }

    #[test]
    fn number_format() {
        assert_eq!(format_f64(0.1), "0.1");
        assert_eq!(format_f64(0.0), "0");
        assert_eq!(format_f64(1e-300), "1e-300");
        assert_eq!(format_f64(2.5e20), "2.5e20");
        assert_eq!(format_f64(-3.0), "-3");
        assert_eq!(format_f64(f64::INFINITY), "inf");
        let x = 0.1 + 0.2;
        assert_eq!(format_f64(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn csv_line_layout() {
        let row = ReportRow {
            sample: 3,
            seed: 7,
            dim: 2,
            report: BoundReport::new(BoundId::SldNorm, 0.5, 1.0).with("lambda_min_rho", 0.25),
        };
        assert_eq!(row.csv_line(), "sld-norm,7,2,0.5,1,0.5,true,3,lambda_min_rho=0.25");
    }

    #[test]
    fn empty_summary_lists_expected_bounds() {
        let s = Summary::from_rows(&[], &[BoundId::SldNorm]);
        assert_eq!(s.total_reports, 0);
        assert_eq!(s.bounds["sld-norm"].violations, 0);
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"min_slack\":\"inf\""));
    }
}
