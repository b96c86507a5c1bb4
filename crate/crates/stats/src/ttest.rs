use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Result, StatsError};
use crate::result::{Alternative, EffectSize, Method, TestResult};

fn mean_and_ss(xs: &[f64]) -> (f64, f64) {
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let ss = xs.iter().map(|x| (x - mean).powi(2)).sum();
    (mean, ss)
}

/// Two-sided independent-samples Student t-test with pooled variance and
/// `n1 + n2 - 2` degrees of freedom. The effect size is Cohen's d using the
/// pooled standard deviation.
pub fn student_t_independent(a: &[f64], b: &[f64]) -> Result<TestResult> {
    for (xs, name) in [(a, "a"), (b, "b")] {
        if xs.len() < 2 {
            return Err(StatsError::TooFewObservations {
                sample: name,
                needed: 2,
                got: xs.len(),
            });
        }
        if xs.iter().any(|v| !v.is_finite()) {
            return Err(StatsError::NonFinite(name));
        }
    }
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let (m1, ss1) = mean_and_ss(a);
    let (m2, ss2) = mean_and_ss(b);
    let df = n1 + n2 - 2.0;
    let pooled_var = (ss1 + ss2) / df;
    if pooled_var <= 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    let sd = pooled_var.sqrt();
    let t = (m1 - m2) / (sd * (1.0 / n1 + 1.0 / n2).sqrt());
    let dist = StudentsT::new(0.0, 1.0, df).expect("df is positive");
    let p = (2.0 * dist.sf(t.abs())).min(1.0);
    Ok(TestResult {
        method: Method::StudentTPooled,
        alternative: Alternative::TwoSided,
        statistic: t,
        p_value: p,
        effect_size: (m1 - m2) / sd,
        effect_size_kind: EffectSize::CohensD,
        n1: a.len(),
        n2: b.len(),
        df: Some(df),
    })
}
