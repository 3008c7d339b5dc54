//! Static SVG export: one shape element per scene mark.

use std::fmt::Write;

use crate::scene::{Anchor, Geometry, Mark, Scene};

fn num(v: f64) -> String {
    let r = (v * 1000.0).round() / 1000.0;
    let r = if r == 0.0 { 0.0 } else { r };
    let s = format!("{r:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn points(pts: &[[f64; 2]]) -> String {
    pts.iter().map(|p| format!("{},{}", num(p[0]), num(p[1]))).collect::<Vec<_>>().join(" ")
}

fn style_attrs(m: &Mark, text: bool) -> String {
    let s = &m.style;
    let mut out = String::new();
    match s.fill {
        Some(c) => write!(out, r#" fill="{c}""#).unwrap(),
        None => out.push_str(r#" fill="none""#),
    }
    if let Some(c) = s.stroke {
        write!(out, r#" stroke="{c}" stroke-width="{}""#, num(s.stroke_width)).unwrap();
    }
    if s.opacity < 1.0 {
        write!(out, r#" opacity="{}""#, num(s.opacity)).unwrap();
    }
    if text {
        if let Some(f) = s.font_size {
            write!(out, r#" font-size="{}""#, num(f)).unwrap();
        }
    }
    if m.emphasized {
        out.push_str(r#" class="emphasized""#);
    }
    out
}

fn element(m: &Mark) -> String {
    match &m.geometry {
        Geometry::Rect { x, y, w, h } => format!(
            r#"<rect x="{}" y="{}" width="{}" height="{}"{}/>"#,
            num(*x),
            num(*y),
            num(*w),
            num(*h),
            style_attrs(m, false)
        ),
        Geometry::Line { x1, y1, x2, y2 } => format!(
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}"{}/>"#,
            num(*x1),
            num(*y1),
            num(*x2),
            num(*y2),
            style_attrs(m, false)
        ),
        Geometry::Polyline { points: pts, closed } => {
            let tag = if *closed { "polygon" } else { "polyline" };
            format!(r#"<{tag} points="{}"{}/>"#, points(pts), style_attrs(m, false))
        }
        Geometry::Circle { cx, cy, r } => {
            format!(r#"<circle cx="{}" cy="{}" r="{}"{}/>"#, num(*cx), num(*cy), num(*r), style_attrs(m, false))
        }
        Geometry::Path { subpaths } => {
            let mut d = String::new();
            for sp in subpaths {
                for (i, p) in sp.iter().enumerate() {
                    if !d.is_empty() {
                        d.push(' ');
                    }
                    write!(d, "{}{},{}", if i == 0 { 'M' } else { 'L' }, num(p[0]), num(p[1])).unwrap();
                }
            }
            format!(r#"<path d="{d}"{}/>"#, style_attrs(m, false))
        }
        Geometry::Text { x, y, content, anchor, angle } => {
            let anchor = match anchor {
                Anchor::Start => "start",
                Anchor::Middle => "middle",
                Anchor::End => "end",
            };
            let rotate = if *angle != 0.0 {
                format!(r#" transform="rotate({} {} {})""#, num(*angle), num(*x), num(*y))
            } else {
                String::new()
            };
            format!(
                r#"<text x="{}" y="{}" text-anchor="{anchor}" dominant-baseline="middle"{rotate}{}>{}</text>"#,
                num(*x),
                num(*y),
                style_attrs(m, true),
                escape(content)
            )
        }
    }
}

/// Serializes a scene as a standalone SVG document. Output is a pure
/// function of the scene.
pub fn scene_to_svg(scene: &Scene) -> String {
    let (w, h) = (num(scene.viewport.width), num(scene.viewport.height));
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif">"#
    )
    .unwrap();
    for m in &scene.marks {
        out.push_str(&element(m));
        out.push('\n');
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::color::Color;
    use crate::layout::Viewport;
    use crate::scene::{MarkRole, Style};

    #[test]
    fn numbers_are_trimmed() {
        assert_eq!(num(1.0), "1");
        assert_eq!(num(1.23456), "1.235");
        assert_eq!(num(-0.0001), "0");
    }

    #[test]
    fn text_is_escaped() {
        let mut s = Scene::new(Viewport::new(10.0, 10.0));
        s.push(Mark::new(
            Geometry::Text { x: 1.0, y: 2.0, content: "a<b & \"c\"".into(), anchor: Anchor::Start, angle: 0.0 },
            Style::text(Color::BLACK, 8.0),
            MarkRole::Label,
            3,
        ));
        let svg = scene_to_svg(&s);
        assert!(svg.contains("a&lt;b &amp; &quot;c&quot;"));
    }
}
