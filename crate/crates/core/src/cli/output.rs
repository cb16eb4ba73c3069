use std::io::Write;

use crate::analytic::{AgeBounds, AnalyticAges};
use crate::error::Result;
use crate::experiments::{Comparison, SweepResult};

/// Ten significant digits, plain decimal notation.
pub fn format_value(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.9e}").parse().expect("formatted float re-parses");
    format!("{rounded}")
}

fn opt(x: Option<f64>) -> String {
    x.map(format_value).unwrap_or_default()
}

/// Columns `series?, n, node_label, analytic, sim_mean?, sim_ci95?, bound_lower?, bound_upper?`.
///
/// Optional columns appear only if some row fills them; an empty result is header-only.
pub fn emit_csv<W: Write>(result: &SweepResult, out: W) -> Result<()> {
    let series = result.has_series();
    let sim = result.has_sim();
    let ci = result.rows.iter().any(|r| r.sim_ci95.is_some());
    let bounds = result.has_bounds();

    let mut w = csv::Writer::from_writer(out);
    let mut header = Vec::new();
    if series {
        header.push("series");
    }
    header.extend(["n", "node_label", "analytic"]);
    if sim {
        header.push("sim_mean");
    }
    if ci {
        header.push("sim_ci95");
    }
    if bounds {
        header.extend(["bound_lower", "bound_upper"]);
    }
    w.write_record(&header)?;

    for row in &result.rows {
        let mut rec = Vec::with_capacity(header.len());
        if series {
            rec.push(row.series.clone().unwrap_or_default());
        }
        rec.push(row.n.to_string());
        rec.push(row.node_label.clone());
        rec.push(format_value(row.analytic));
        if sim {
            rec.push(opt(row.sim_mean));
        }
        if ci {
            rec.push(opt(row.sim_ci95));
        }
        if bounds {
            rec.push(opt(row.bound_lower));
            rec.push(opt(row.bound_upper));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `node_label, v`: every node, then `A` under MITM.
pub fn emit_ages<W: Write>(ages: &AnalyticAges, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["node_label", "v"])?;
    for i in 1..=ages.n {
        let label = if i == ages.n { "n".to_string() } else { i.to_string() };
        w.write_record([label, format_value(ages.node_age(i))])?;
    }
    if let Some(a) = ages.v_adversary {
        w.write_record(["A".to_string(), format_value(a)])?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `n, n0, sum, lower_env, upper_env`.
pub fn emit_lemma<W: Write>(n: usize, n0: usize, sum: f64, env: &AgeBounds, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "n0", "sum", "lower_env", "upper_env"])?;
    w.write_record([
        n.to_string(),
        n0.to_string(),
        format_value(sum),
        format_value(env.lower),
        format_value(env.upper),
    ])?;
    w.flush()?;
    Ok(())
}

/// Columns `node_label, analytic, sim_mean, sim_ci95?, rel_err, ci_excludes`.
pub fn emit_comparison<W: Write>(cmp: &Comparison, out: W) -> Result<()> {
    let ci = cmp.report.ci95.as_ref();
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["node_label", "analytic", "sim_mean"];
    if ci.is_some() {
        header.push("sim_ci95");
    }
    header.extend(["rel_err", "ci_excludes"]);
    w.write_record(&header)?;
    let n = cmp.analytic.len();
    for i in 0..n {
        let mut rec = vec![
            if i + 1 == n {
                "n".to_string()
            } else {
                (i + 1).to_string()
            },
            format_value(cmp.analytic[i]),
            format_value(cmp.report.mean_age[i]),
        ];
        if let Some(c) = ci {
            rec.push(format_value(c[i]));
        }
        rec.push(format_value(cmp.rel_err[i]));
        rec.push(cmp.ci_excludes.contains(&(i + 1)).to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
