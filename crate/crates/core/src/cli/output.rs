//! Text renderings of run results: JSON lines, CSV tables and an SVG picture.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::functionals::glimm::monitor_event;
use crate::functionals::lyapunov::{BoundaryEstimate, LyapunovReport};
use crate::tracking::{FrontKind, History, RunResult, Sampling};
use crate::validation::convergence::ConvergenceTable;
use crate::waves::WaveFamily;

/// 17 significant digits.
pub fn g17(x: f64) -> String {
    format!("{x:.16e}")
}

fn check_finite(name: &str, values: &[f64]) -> Result<()> {
    match values.iter().find(|v| !v.is_finite()) {
        Some(v) => Err(Error::Invalid(format!("non-finite value {v} in {name}"))),
        None => Ok(()),
    }
}

fn csv_line(out: &mut String, name: &str, values: &[f64]) -> Result<()> {
    check_finite(name, values)?;
    let cells: Vec<String> = values.iter().map(|v| g17(*v)).collect();
    out.push_str(&cells.join(","));
    out.push('\n');
    Ok(())
}

/// One JSON object per event, with the monitor verdict at rate `monitor_c`.
pub fn events_jsonl(result: &RunResult, monitor_c: f64) -> Result<String> {
    let mut out = String::new();
    for (k, e) in result.history.events.iter().enumerate() {
        let v = monitor_event(
            &result.reports[k],
            &result.reports[k + 1],
            e.measure_kind,
            e.measure,
            monitor_c,
        );
        check_finite("events", &[e.x, e.y, e.d_f, e.d_q, e.measure, v.rate])?;
        let mut obj = serde_json::to_value(e).map_err(|err| Error::Io(err.to_string()))?;
        if let Value::Object(m) = &mut obj {
            m.insert(
                "verdict".into(),
                json!({ "f_ok": v.f_ok, "q_ok": v.q_ok, "rate": v.rate }),
            );
        }
        out.push_str(&obj.to_string());
        out.push('\n');
    }
    Ok(out)
}

/// One row per functional report: the initial one (`event = -1`) and one after each event.
pub fn functionals_csv(result: &RunResult) -> Result<String> {
    let mut out =
        String::from("event,x,V,Q_approach,Q_strong,Q_boundary,Q_wedge,Q,F,nonphysical,fronts\n");
    for (k, r) in result.reports.iter().enumerate() {
        let q = &r.q;
        let row = [
            k as f64 - 1.0,
            r.x,
            r.v,
            q.q_approach,
            q.q_strong,
            q.q_boundary,
            q.q_wedge,
            q.total,
            r.f,
            r.nonphysical,
            r.fronts as f64,
        ];
        check_finite("functionals", &row)?;
        let _ = writeln!(
            out,
            "{},{},{}",
            k as i64 - 1,
            row[1..10]
                .iter()
                .map(|v| g17(*v))
                .collect::<Vec<_>>()
                .join(","),
            r.fronts
        );
    }
    Ok(out)
}

/// The coupled functional at each station.
pub fn coupling_csv(reports: &[LyapunovReport]) -> Result<String> {
    let mut out = String::from("x,phi,phi_1,phi_2,phi_3,phi_4,unweighted,l1,Q_u,Q_v,partial\n");
    for r in reports {
        let c = r.components;
        csv_line(
            &mut out,
            "coupling",
            &[
                r.x,
                r.phi,
                c[0],
                c[1],
                c[2],
                c[3],
                r.unweighted,
                r.l1,
                r.q_u,
                r.q_v,
                if r.partial { 1.0 } else { 0.0 },
            ],
        )?;
    }
    Ok(out)
}

pub fn boundary_csv(estimates: &[BoundaryEstimate]) -> Result<String> {
    let mut out = String::from("x,p_1,p_2,p_3,p_4,reflection_ratio,contact_ratio\n");
    for b in estimates {
        csv_line(
            &mut out,
            "boundary",
            &[
                b.x,
                b.p[0],
                b.p[1],
                b.p[2],
                b.p[3],
                b.reflection_ratio,
                b.contact_ratio,
            ],
        )?;
    }
    Ok(out)
}

/// Grid samples `x, y, u, v, p, rho` on `nx` stations and `ny` heights from
/// `y_min` up to the wall.
pub fn solution_csv(history: &History, sampling: &Sampling) -> Result<String> {
    let mut out = String::from("x,y,u,v,p,rho\n");
    let (nx, ny) = (sampling.nx.max(2), sampling.ny.max(2));
    for i in 0..nx {
        let x = history.x_end * i as f64 / (nx - 1) as f64;
        let top = history.boundary.g(x);
        let ys: Vec<f64> = (0..ny)
            .map(|j| sampling.y_min + (top - sampling.y_min) * j as f64 / (ny - 1) as f64)
            .collect();
        for (y, s) in ys.iter().zip(history.sample(x, &ys)) {
            if let Some(s) = s {
                csv_line(&mut out, "solution", &[x, *y, s.u, s.v, s.p, s.rho])?;
            }
        }
    }
    Ok(out)
}

pub fn convergence_csv(t: &ConvergenceTable) -> Result<String> {
    let mut out = String::from("eps,events,fronts,x_end,completed,seconds,distance_to_next\n");
    let next = t.consecutive();
    for (k, r) in t.rows.iter().enumerate() {
        let d = next.get(k).copied().flatten();
        check_finite("convergence", &[r.eps, r.x_end])?;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            g17(r.eps),
            r.events,
            r.fronts,
            g17(r.x_end),
            r.completed,
            g17(r.seconds),
            d.map(g17).unwrap_or_default()
        );
    }
    Ok(out)
}

fn family_color(f: WaveFamily) -> &'static str {
    match f {
        WaveFamily::One => "#b03a2e",
        WaveFamily::Two | WaveFamily::Three => "#1e8449",
        WaveFamily::Four => "#1f4e9c",
        WaveFamily::NonPhysical => "#888888",
    }
}

/// Front trajectories over the wall: colored by family, the strong shock thick,
/// nonphysical fronts dashed.
pub fn pattern_svg(history: &History, y_min: f64) -> String {
    let (w, h) = (900.0, 540.0);
    let x_end = history.x_end.max(1e-9);
    let bd = &history.boundary;
    let mut wall: Vec<[f64; 2]> = bd
        .vertices
        .iter()
        .copied()
        .filter(|v| v[0] < x_end)
        .collect();
    wall.push([x_end, bd.g(x_end)]);
    let y_top = wall.iter().map(|v| v[1]).fold(0.0, f64::max) + 0.05 * (0.0 - y_min).abs();
    let sx = |x: f64| 20.0 + (w - 40.0) * x / x_end;
    let sy = |y: f64| 20.0 + (h - 40.0) * (y_top - y) / (y_top - y_min);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r##"<rect width="{w}" height="{h}" fill="#ffffff"/>"##);
    let mut body = String::new();
    for r in &history.fronts {
        let x1 = r.death.unwrap_or(x_end).min(x_end);
        if x1 <= r.birth {
            continue;
        }
        let (y0, y1) = (r.y_at(r.birth), r.y_at(x1));
        if y0.max(y1) < y_min {
            continue;
        }
        let family = r
            .waves
            .first()
            .map(|w| w.family)
            .unwrap_or(WaveFamily::NonPhysical);
        let style = match r.kind {
            FrontKind::Strong => r##"stroke="#000000" stroke-width="2.5""##.to_string(),
            FrontKind::NonPhysical => {
                r##"stroke="#888888" stroke-width="0.6" stroke-dasharray="3,2""##.to_string()
            }
            FrontKind::Weak => format!(r#"stroke="{}" stroke-width="0.8""#, family_color(family)),
        };
        let _ = writeln!(
            body,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" {style}/>"#,
            sx(r.birth),
            sy(y0),
            sx(x1),
            sy(y1)
        );
    }
    let mut poly: Vec<String> = wall
        .iter()
        .map(|v| format!("{:.3},{:.3}", sx(v[0]), sy(v[1])))
        .collect();
    poly.push(format!("{:.3},{:.3}", sx(x_end), 0.0));
    poly.push(format!("{:.3},{:.3}", sx(0.0), 0.0));
    let _ = writeln!(
        s,
        r#"<clipPath id="flow"><rect x="20" y="0" width="{}" height="{}"/></clipPath>"#,
        w - 40.0,
        h - 20.0
    );
    let _ = writeln!(s, r#"<g clip-path="url(#flow)">"#);
    s.push_str(&body);
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r##"<polygon points="{}" fill="#d5d8dc" stroke="#000000" stroke-width="1.5"/>"##,
        poly.join(" ")
    );
    s.push_str("</svg>\n");
    s
}
