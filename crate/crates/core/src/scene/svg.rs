use std::fmt::Write;

use crate::color::Hsl;
use crate::geom::Point;

use super::{sort_polygons, ArcItem, CardPayload, DrawItem, PolygonItem, Scene};

const STRIP_GAP: f64 = 8.0;
const SLIDER_HEIGHT: f64 = 10.0;
const CARD_WIDTH: f64 = 140.0;
const CARD_LINE: f64 = 14.0;

/// Static SVG export. Equal scenes give byte-identical documents.
///
/// Groups, in paint order: `layer-0` … `layer-4`, `histogram`, `slider`,
/// `cards`. Histogram and slider sit in a strip below the map.
pub fn scene_to_svg(s: &Scene) -> String {
    let (w, h) = (f64::from(s.canvas.w), f64::from(s.canvas.h));
    let strip = s.histogram.iter().map(|b| b.height).fold(0.0, f64::max).ceil();
    let total_h = if s.slider.t > 0 {
        h + STRIP_GAP + strip + 2.0 * STRIP_GAP + SLIDER_HEIGHT
    } else {
        h
    };

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        num(w),
        num(total_h),
        num(w),
        num(total_h)
    );

    for (z, items) in s.layers.iter().enumerate() {
        let _ = writeln!(out, "<g id=\"layer-{z}\">");
        let mut polys: Vec<PolygonItem> = Vec::new();
        let mut arcs: Vec<&ArcItem> = Vec::new();
        for item in items {
            match item {
                DrawItem::Polygon(p) => polys.push(p.clone()),
                DrawItem::Arc(a) => arcs.push(a),
            }
        }
        sort_polygons(&mut polys);
        arcs.sort_by_key(|a| (a.src, a.dst));
        for p in &polys {
            write_polygon(&mut out, p);
        }
        for a in arcs {
            write_arc(&mut out, a);
        }
        out.push_str("</g>\n");
    }

    let base = h + STRIP_GAP + strip;
    out.push_str("<g id=\"histogram\">\n");
    if s.slider.t > 0 {
        let bw = w / s.slider.t as f64;
        for (i, bar) in s.histogram.iter().enumerate() {
            let _ = writeln!(
                out,
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#777777\" opacity=\"{}\"><title>{} {}</title></rect>",
                num(i as f64 * bw),
                num(base - bar.height),
                num(bw * 0.8),
                num(bar.height),
                if bar.in_window { "1.000" } else { "0.350" },
                escape(&bar.label),
                bar.total
            );
        }
    }
    out.push_str("</g>\n");

    out.push_str("<g id=\"slider\">\n");
    if s.slider.t > 0 {
        let bw = w / s.slider.t as f64;
        let y = base + STRIP_GAP;
        let _ = writeln!(
            out,
            "<rect x=\"0.000\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#dddddd\"/>",
            num(y),
            num(w),
            num(SLIDER_HEIGHT)
        );
        let (x0, x1) = (s.slider.lo as f64 * bw, (s.slider.hi + 1) as f64 * bw);
        let _ = writeln!(
            out,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#888888\"/>",
            num(x0),
            num(y),
            num(x1 - x0),
            num(SLIDER_HEIGHT)
        );
        for x in [x0, x1] {
            let _ = writeln!(
                out,
                "<rect x=\"{}\" y=\"{}\" width=\"4.000\" height=\"{}\" fill=\"#333333\"/>",
                num(x - 2.0),
                num(y - 2.0),
                num(SLIDER_HEIGHT + 4.0)
            );
        }
    }
    out.push_str("</g>\n");

    out.push_str("<g id=\"cards\">\n");
    for card in &s.cards {
        write_card(&mut out, card);
    }
    out.push_str("</g>\n</svg>\n");
    out
}

fn write_polygon(out: &mut String, p: &PolygonItem) {
    let building = p
        .building
        .map(|id| format!(" data-building=\"{id}\""))
        .unwrap_or_default();
    let _ = writeln!(
        out,
        "<polygon points=\"{}\" fill=\"{}\"{building}/>",
        point_list(&p.points),
        hex(p.fill)
    );
}

fn write_arc(out: &mut String, a: &ArcItem) {
    let mut d = String::new();
    for (i, q) in a.points.iter().enumerate() {
        let _ = write!(
            d,
            "{}{} {}",
            if i == 0 { "M" } else { " L" },
            num(q.x),
            num(q.y)
        );
    }
    let color = hex(a.fill);
    let _ = writeln!(
        out,
        "<path d=\"{d}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{}\" data-src=\"{}\" data-dst=\"{}\" data-count=\"{}\"/>",
        num(a.thickness),
        a.src,
        a.dst,
        a.count
    );
    let _ = writeln!(
        out,
        "<polygon class=\"arrow\" points=\"{}\" fill=\"{color}\"/>",
        point_list(&a.arrow)
    );
}

fn write_card(out: &mut String, c: &CardPayload) {
    let mut lines = vec![
        escape(&c.name),
        format!("out {} in {} net {}", c.out, c.inflow, c.net),
        format!("internal {}", c.internal),
    ];
    lines.extend(c.partners.iter().map(|p| format!("#{} out {} in {}", p.id, p.out, p.inflow)));
    let _ = writeln!(
        out,
        "<g class=\"card\" data-building=\"{}\" data-pinned=\"{}\" transform=\"translate({} {})\">",
        c.building,
        c.pinned,
        num(c.x),
        num(c.y)
    );
    let _ = writeln!(
        out,
        "<rect width=\"{}\" height=\"{}\" fill=\"#ffffff\" stroke=\"#333333\"/>",
        num(CARD_WIDTH),
        num(CARD_LINE * (lines.len() as f64 + 0.5))
    );
    for (i, line) in lines.iter().enumerate() {
        let _ = writeln!(
            out,
            "<text x=\"4.000\" y=\"{}\" font-size=\"11\">{line}</text>",
            num(CARD_LINE * (i as f64 + 1.0))
        );
    }
    out.push_str("</g>\n");
}

fn point_list(points: &[Point]) -> String {
    points
        .iter()
        .map(|q| format!("{},{}", num(q.x), num(q.y)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn hex(c: Hsl) -> String {
    format!("#{}", c.to_rgb())
}

/// Three decimals, without a negative zero.
fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(ch),
        }
    }
    out
}
