use std::fmt::Write;

use super::svg::{escape, render_ast_svg, Palette};
use super::{figures, BarChart, LineChart, ReportBundle};

/// Numbers are printed with `Display`, which gives the shortest form that
/// reads back to the same value.
fn num(v: f64) -> String {
    format!("{v}")
}

const PLOT_H: f64 = 200.0;
const BAR_W: f64 = 36.0;
const GROUP_GAP: f64 = 40.0;
const LEFT: f64 = 48.0;
const TOP: f64 = 24.0;

pub fn bar_chart_svg(chart: &BarChart) -> String {
    let metrics: Vec<&str> = {
        let mut m: Vec<&str> = Vec::new();
        for b in &chart.bars {
            if !m.contains(&b.metric.as_str()) {
                m.push(&b.metric);
            }
        }
        m
    };
    let per_group = chart.bars.iter().filter(|b| Some(&b.metric.as_str()) == metrics.first()).count().max(1);
    let group_w = per_group as f64 * BAR_W;
    let width = LEFT + metrics.len() as f64 * (group_w + GROUP_GAP) + 160.0;
    let height = TOP + PLOT_H + 48.0;
    let base = TOP + PLOT_H;
    let mut s = String::new();
    let _ = write!(s, r#"<svg class="chart bars" viewBox="0 0 {width} {height}" width="{width}" height="{height}" font-family="sans-serif" font-size="11">"#);
    for t in &chart.ticks {
        let y = base - t / chart.axis_max * PLOT_H;
        let _ = write!(
            s,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{x2}" y2="{y:.2}" stroke="#ddd"/><text x="{tx}" y="{ty:.2}" text-anchor="end">{label}%</text>"##,
            x2 = width - 160.0,
            tx = LEFT - 6.0,
            ty = y + 4.0,
            label = num(*t)
        );
    }
    for (gi, metric) in metrics.iter().enumerate() {
        let gx = LEFT + GROUP_GAP / 2.0 + gi as f64 * (group_w + GROUP_GAP);
        for (bi, b) in chart.bars.iter().filter(|b| b.metric == *metric).enumerate() {
            let h = b.value.max(0.0) / chart.axis_max * PLOT_H;
            let x = gx + bi as f64 * BAR_W;
            let _ = write!(
                s,
                r#"<rect class="bar" data-approach="{a}" data-metric="{metric}" x="{x:.2}" y="{y:.2}" width="{w}" height="{h:.2}" fill="{c}"/><text x="{lx:.2}" y="{ly:.2}" text-anchor="middle">{v}%</text>"#,
                a = escape(&b.approach),
                y = base - h,
                w = BAR_W - 6.0,
                c = b.color,
                lx = x + (BAR_W - 6.0) / 2.0,
                ly = base - h - 4.0,
                v = num(b.value)
            );
        }
        let title = if *metric == "cyclomatic" { "Cyclomatic complexity" } else { "Coupling" };
        let _ = write!(
            s,
            r#"<text x="{x:.2}" y="{y}" text-anchor="middle">{title}</text>"#,
            x = gx + group_w / 2.0 - 3.0,
            y = base + 18.0
        );
    }
    let lx = width - 140.0;
    for (i, b) in chart.bars.iter().filter(|b| Some(&b.metric.as_str()) == metrics.first()).enumerate() {
        let y = TOP + i as f64 * 18.0;
        let _ = write!(
            s,
            r#"<rect x="{lx}" y="{y}" width="12" height="12" fill="{c}"/><text x="{tx}" y="{ty}">{a}</text>"#,
            c = b.color,
            tx = lx + 18.0,
            ty = y + 10.0,
            a = escape(&b.approach)
        );
    }
    s.push_str("</svg>");
    s
}

pub fn line_chart_svg(chart: &LineChart) -> String {
    let step = 90.0;
    let plot_w = step * (chart.labels.len().max(2) - 1) as f64;
    let width = LEFT + plot_w + 40.0 + 140.0;
    let height = TOP + PLOT_H + 40.0;
    let base = TOP + PLOT_H;
    let x_of = |i: usize| LEFT + 20.0 + i as f64 * step;
    let y_of = |v: f64| base - v * PLOT_H;
    let mut s = String::new();
    let _ = write!(s, r#"<svg class="chart lines" viewBox="0 0 {width} {height}" width="{width}" height="{height}" font-family="sans-serif" font-size="11">"#);
    for t in &chart.ticks {
        let y = y_of(*t);
        let _ = write!(
            s,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{x2:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{tx}" y="{ty:.2}" text-anchor="end">{label}</text>"##,
            x2 = LEFT + plot_w + 40.0,
            tx = LEFT - 6.0,
            ty = y + 4.0,
            label = num(*t)
        );
    }
    for (i, l) in chart.labels.iter().enumerate() {
        let _ = write!(s, r#"<text x="{x:.2}" y="{y}" text-anchor="middle">{l}</text>"#, x = x_of(i), y = base + 18.0, l = escape(l));
    }
    for (si, series) in chart.series.iter().enumerate() {
        let pts: Vec<(f64, f64)> =
            series.points.iter().enumerate().filter_map(|(i, p)| p.map(|v| (x_of(i), y_of(v)))).collect();
        if pts.len() > 1 {
            let d: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            let _ = write!(s, r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="2"/>"#, d.join(" "), series.color);
        }
        for (x, y) in &pts {
            let _ = write!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="{}"/>"#, series.color);
        }
        let lx = LEFT + plot_w + 56.0;
        let ly = TOP + si as f64 * 18.0;
        let _ = write!(
            s,
            r#"<rect x="{lx}" y="{ly}" width="12" height="12" fill="{c}"/><text x="{tx}" y="{ty}">{a}</text>"#,
            c = series.color,
            tx = lx + 18.0,
            ty = ly + 10.0,
            a = escape(&series.approach)
        );
    }
    s.push_str("</svg>");
    s
}

const STYLE: &str = "body{font-family:sans-serif;margin:2em;color:#222}table{border-collapse:collapse}\
th,td{border:1px solid #ccc;padding:4px 10px;text-align:right}th:first-child,td:first-child{text-align:left}\
.panels{display:flex;gap:1em;overflow-x:auto}figure{margin:0}figcaption{font-size:0.9em;color:#555}\
.meta{color:#666}";

pub fn render_html(bundle: &ReportBundle) -> String {
    let f = figures(bundle);
    let mut s = String::new();
    s.push_str("<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>relicforge report</title>\n");
    let _ = writeln!(s, "<style>{STYLE}</style>\n</head>\n<body>");
    s.push_str("<h1>Modernization report</h1>\n");
    let _ = writeln!(
        s,
        "<p class=\"meta\">Generated {} by relicforge {}</p>",
        escape(&bundle.generated_at),
        escape(&bundle.toolkit_version)
    );

    s.push_str("<h2>Results</h2>\n<table>\n<tr><th>Approach</th><th>Files</th><th>Accuracy</th><th>Complexity drop</th><th>Coupling drop</th><th>Fallbacks</th></tr>\n");
    for r in &f.table {
        let _ = writeln!(
            s,
            "<tr><td>{}</td><td>{}</td><td>{}</td><td>{}% ({} \u{2192} {})</td><td>{}% ({} \u{2192} {})</td><td>{}</td></tr>",
            escape(&r.approach),
            r.n,
            num(r.accuracy),
            num(r.cx_drop_pct),
            num(r.mean_cx_before),
            num(r.mean_cx_after),
            num(r.cp_drop_pct),
            num(r.mean_cp_before),
            num(r.mean_cp_after),
            r.fallback_count
        );
    }
    s.push_str("</table>\n");

    s.push_str("<h2>Complexity and coupling drop</h2>\n");
    s.push_str(&bar_chart_svg(&f.complexity_drop));
    s.push_str("\n<h2>Accuracy</h2>\n");
    s.push_str(&line_chart_svg(&f.accuracy_trend));
    s.push('\n');

    if !bundle.ast_pairs.is_empty() {
        s.push_str("<h2>Before and after</h2>\n");
        for (pair, cap) in bundle.ast_pairs.iter().zip(&f.panels) {
            let _ = writeln!(s, "<section class=\"pair\">\n<h3>{}</h3>\n<div class=\"panels\">", escape(&pair.id));
            let _ = writeln!(
                s,
                "<figure>{}<figcaption>COBOL: {} nodes, {} paths, cyclomatic {}</figcaption></figure>",
                render_ast_svg(&pair.cobol, Palette::Red),
                cap.cobol_nodes,
                cap.cobol_paths,
                num(cap.cx_before)
            );
            let _ = writeln!(
                s,
                "<figure>{}<figcaption>Java: {} nodes, {} paths, cyclomatic {}</figcaption></figure>",
                render_ast_svg(&pair.java, Palette::Green),
                cap.java_nodes,
                cap.java_paths,
                num(cap.cx_after)
            );
            s.push_str("</div>\n</section>\n");
        }
    }
    s.push_str("</body>\n</html>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluate::Approach;
    use crate::report::tests::summary;
    use crate::report::{document, AstPair};
    use crate::tree::TreeNode;

    fn bar_heights(svg: &str) -> Vec<(String, f64)> {
        svg.split("<rect class=\"bar\" ")
            .skip(1)
            .map(|r| {
                let attr = |k: &str| r.split(&format!("{k}=\"")).nth(1).unwrap().split('"').next().unwrap().to_string();
                (attr("data-approach"), attr("height").parse().unwrap())
            })
            .collect()
    }

    fn bundle(pairs: Vec<AstPair>) -> ReportBundle {
        ReportBundle::new(
            vec![summary(Approach::Rules, (18.0, 14.04), 0.82), summary(Approach::Ai, (18.0, 11.7), 0.93)],
            pairs,
            "2026-01-01T00:00:00Z",
        )
    }

    #[test]
    fn bars_are_proportional() {
        let html = render_html(&bundle(vec![]));
        let bars = bar_heights(&html);
        let rules = bars.iter().find(|b| b.0 == "Rules").unwrap().1;
        let ai = bars.iter().find(|b| b.0 == "AI").unwrap().1;
        assert!((rules / ai - 22.0 / 35.0).abs() * ai < 1.0, "{rules} {ai}");
    }

    #[test]
    fn charts_only_without_pairs() {
        let html = render_html(&bundle(vec![]));
        assert!(!html.contains("class=\"pair\""));
        assert!(html.contains("class=\"chart bars\""));
        assert!(html.contains("class=\"chart lines\""));
        assert!(!html.contains("http://") && !html.contains("https://"));
    }

    fn tree(kind: &str, n: usize) -> TreeNode {
        TreeNode::new(kind, "", 0).with_children((1..n).map(|_| TreeNode::new("Leaf", "", 0)).collect())
    }

    #[test]
    fn panel_captions() {
        let pair = AstPair { id: "f1".into(), cobol: tree("Program", 50), java: tree("Class", 25), cx_before: 18.0, cx_after: 11.7 };
        let html = render_html(&bundle(vec![pair]));
        assert!(html.contains("50 nodes"));
        assert!(html.contains("25 nodes"));
        assert!(html.contains("stroke=\"#d62728\""));
        assert!(html.contains("stroke=\"#2ca02c\""));
    }

    #[test]
    fn json_and_html_show_the_same_numbers() {
        let pair = AstPair { id: "f1".into(), cobol: tree("Program", 5), java: tree("Class", 3), cx_before: 4.0, cx_after: 2.0 };
        let b = bundle(vec![pair]);
        let html = render_html(&b);
        let json = serde_json::to_value(document(&b)).unwrap();
        let mut known = Vec::new();
        collect_numbers(&json, &mut known);
        for n in visible_numbers(&html) {
            assert!(known.iter().any(|k| (k - n).abs() < 1e-12), "{n} shown but not in JSON");
        }
    }

    pub(crate) fn visible_numbers(html: &str) -> Vec<f64> {
        let body = html.split("</style>").nth(1).unwrap_or(html);
        let mut text = String::new();
        let mut in_tag = false;
        for c in body.chars() {
            match c {
                '<' => in_tag = true,
                '>' => {
                    in_tag = false;
                    text.push(' ');
                }
                c if !in_tag => text.push(c),
                _ => {}
            }
        }
        numbers_in(&text)
    }

    pub(crate) fn numbers_in(text: &str) -> Vec<f64> {
        let mut out = Vec::new();
        let mut cur = String::new();
        for c in text.chars().chain(std::iter::once(' ')) {
            if c.is_ascii_digit() || (c == '.' && !cur.is_empty() && !cur.contains('.')) {
                cur.push(c);
            } else if !cur.is_empty() {
                out.push(cur.trim_end_matches('.').parse().unwrap());
                cur.clear();
            }
        }
        out
    }

    pub(crate) fn collect_numbers(v: &serde_json::Value, out: &mut Vec<f64>) {
        match v {
            serde_json::Value::Number(n) => out.push(n.as_f64().unwrap()),
            serde_json::Value::String(s) => out.extend(numbers_in(s)),
            serde_json::Value::Array(a) => a.iter().for_each(|x| collect_numbers(x, out)),
            serde_json::Value::Object(o) => o.values().for_each(|x| collect_numbers(x, out)),
            _ => {}
        }
    }
}
