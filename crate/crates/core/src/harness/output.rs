use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use super::pipeline::{ComparisonReport, Curve};
use crate::error::{Error, Result};
use crate::spectra::Provenance;

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes `contents` to a temporary file next to `path` and renames it into
/// place, so readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(io_error(dir))?;
    let name = path
        .file_name()
        .ok_or_else(|| Error::Config(format!("output path {} has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result.map_err(io_error(path))
}

/// CSV with a `# provenance: <sha256>` line, an `omega,<curves>` header and
/// one row per grid point. Values use the shortest round-trip representation.
pub fn render_csv(curves: &[Curve], provenance: &Provenance) -> Result<String> {
    let first = curves
        .first()
        .ok_or_else(|| Error::Precondition("no curves to write".into()))?;
    let omega = first.spectrum.omega();
    if curves.iter().any(|c| c.spectrum.omega() != omega) {
        return Err(Error::GridMismatch);
    }
    let mut out = String::with_capacity(omega.len() * 24 * (curves.len() + 1));
    writeln!(out, "# provenance: {}", provenance.hash()).expect("writing to a String");
    out.push_str("omega");
    for c in curves {
        out.push(',');
        out.push_str(&c.spec.name);
    }
    out.push('\n');
    for (i, w) in omega.iter().enumerate() {
        write!(out, "{w}").expect("writing to a String");
        for c in curves {
            write!(out, ",{}", c.spectrum.intensity()[i]).expect("writing to a String");
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn write_csv(path: &Path, curves: &[Curve], provenance: &Provenance) -> Result<()> {
    write_atomic(path, render_csv(curves, provenance)?.as_bytes())
}

pub fn write_report(path: &Path, report: &ComparisonReport) -> Result<()> {
    let text = serde_json::to_string_pretty(report)
        .map_err(|e| Error::Precondition(format!("report serialisation failed: {e}")))?;
    write_atomic(path, text.as_bytes())
}

const PALETTE: [&str; 6] = ["#000000", "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd"];

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Standalone SVG 1.1 line plot of unit-maximum intensities against ω/ω₀,
/// with a legend and the full parameter set embedded as metadata.
pub fn render_svg(curves: &[Curve], provenance: &Provenance) -> Result<String> {
    let first = curves
        .first()
        .ok_or_else(|| Error::Precondition("no spectra to plot".into()))?;
    let omega = first.spectrum.omega();
    if curves.iter().any(|c| c.spectrum.omega() != omega) {
        return Err(Error::GridMismatch);
    }
    let (width, height) = (800.0, 500.0);
    let (left, right, top, bottom) = (70.0, 20.0, 20.0, 60.0);
    let (x0, x1) = (omega[0], omega[omega.len() - 1]);
    let px = |w: f64| left + (w - x0) / (x1 - x0) * (width - left - right);
    let py = |v: f64| height - bottom - v * (height - top - bottom);

    let mut s = String::new();
    let w = &mut s;
    let _ = writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let params = serde_json::to_string(provenance).expect("JSON values always serialise");
    let _ = writeln!(w, "<metadata>{}</metadata>", escape(&params));
    let _ = writeln!(w, "<desc>provenance {}</desc>", provenance.hash());
    let _ = writeln!(w, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    let _ = writeln!(
        w,
        r#"<g stroke="black" fill="none"><line x1="{left}" y1="{b}" x2="{r}" y2="{b}"/><line x1="{left}" y1="{top}" x2="{left}" y2="{b}"/></g>"#,
        b = height - bottom,
        r = width - right
    );
    let _ = writeln!(w, r#"<g font-family="sans-serif" font-size="12" fill="black">"#);
    for i in 0..=5 {
        let v = i as f64 / 5.0;
        let _ = writeln!(
            w,
            r#"<line x1="{a}" y1="{y}" x2="{left}" y2="{y}" stroke="black"/><text x="{t}" y="{ty}" text-anchor="end">{v:.1}</text>"#,
            a = left - 5.0,
            y = py(v),
            t = left - 8.0,
            ty = py(v) + 4.0
        );
    }
    for i in 0..=5 {
        let wv = x0 + (x1 - x0) * i as f64 / 5.0;
        let _ = writeln!(
            w,
            r#"<line x1="{x}" y1="{b}" x2="{x}" y2="{b5}" stroke="black"/><text x="{x}" y="{ty}" text-anchor="middle">{wv:.2}</text>"#,
            x = px(wv),
            b = height - bottom,
            b5 = height - bottom + 5.0,
            ty = height - bottom + 20.0
        );
    }
    let _ = writeln!(
        w,
        r#"<text x="{x}" y="{y}" text-anchor="middle">ω/ω₀</text>"#,
        x = 0.5 * (left + width - right),
        y = height - 15.0
    );
    let _ = writeln!(
        w,
        r#"<text x="15" y="{y}" text-anchor="middle" transform="rotate(-90 15 {y})">normalized intensity</text>"#,
        y = 0.5 * (top + height - bottom)
    );
    let _ = writeln!(w, "</g>");
    for (i, c) in curves.iter().enumerate() {
        let norm = c.spectrum.normalized();
        let mut points = String::new();
        for (wv, v) in norm.omega().iter().zip(norm.intensity()) {
            let _ = write!(points, "{:.2},{:.2} ", px(*wv), py(*v));
        }
        let _ = writeln!(
            w,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            PALETTE[i % PALETTE.len()],
            points.trim_end()
        );
    }
    let _ = writeln!(w, r#"<g font-family="sans-serif" font-size="12">"#);
    for (i, c) in curves.iter().enumerate() {
        let y = top + 15.0 + 18.0 * i as f64;
        let x = width - right - 330.0;
        let _ = writeln!(
            w,
            r#"<line x1="{x}" y1="{ly}" x2="{x2}" y2="{ly}" stroke="{col}" stroke-width="2"/><text x="{tx}" y="{y}">{label}</text>"#,
            ly = y - 4.0,
            x2 = x + 25.0,
            col = PALETTE[i % PALETTE.len()],
            tx = x + 32.0,
            label = escape(&format!("{}: {}", c.spec.name, c.spec.label()))
        );
    }
    let _ = writeln!(w, "</g>\n</svg>");
    Ok(s)
}

pub fn emit_svg(curves: &[Curve], path: &Path, provenance: &Provenance) -> Result<()> {
    write_atomic(path, render_svg(curves, provenance)?.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::CurveSpec;
    use crate::spectra::{Grid, Spectrum};

    fn curve(name: &str, values: Vec<f64>) -> Curve {
        let grid = Grid::linspace(0.5, 1.5, values.len()).unwrap();
        Curve {
            spec: CurveSpec { name: name.into(), ..CurveSpec::classical() },
            spectrum: Spectrum::new(grid, values).unwrap(),
        }
    }

    fn prov() -> Provenance {
        Provenance::new("t", serde_json::json!({"eta": 0.5})).unwrap()
    }

    #[test]
    fn csv_layout() {
        let text = render_csv(&[curve("a", vec![0.0, 1.0, 0.25]), curve("b", vec![1.0, 0.5, 0.1])], &prov()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], format!("# provenance: {}", prov().hash()));
        assert_eq!(lines[1], "omega,a,b");
        assert_eq!(lines[2], "0.5,0,1");
        assert_eq!(lines[3], "1,1,0.5");
    }

    #[test]
    fn svg_has_one_polyline_per_curve() {
        let one = render_svg(&[curve("a", vec![0.0, 1.0, 0.25])], &prov()).unwrap();
        assert_eq!(one.matches("<polyline").count(), 1);
        let three = render_svg(
            &[curve("a", vec![0.0, 1.0, 0.2]), curve("b", vec![1.0, 0.5, 0.1]), curve("c", vec![0.3, 0.3, 1.0])],
            &prov(),
        )
        .unwrap();
        assert_eq!(three.matches("<polyline").count(), 3);
        assert!(three.contains("a: classical") && three.contains("c: classical"));
        assert!(three.contains("&quot;eta&quot;:0.5"));
        assert!(render_svg(&[], &prov()).is_err());
    }

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested/out.txt");
        write_atomic(&path, b"first").unwrap();
        write_atomic(&path, b"second").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "second");
        assert_eq!(std::fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    }
}
