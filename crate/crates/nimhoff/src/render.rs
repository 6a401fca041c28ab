//! Grid and difference images. One cell maps to one pixel (times an integer
//! zoom) with the origin at the lower-left corner; output is binary PPM or
//! SVG rectangles, chosen by the file extension. No anti-aliasing, so tests
//! can assert exact pixel counts.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use thiserror::Error;

use crate::game::{Label, LabelGrid, Point};

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("unsupported image extension {0:?}, expected .ppm or .svg")]
    UnknownFormat(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Rgb = [u8; 3];

pub const WHITE: Rgb = [255, 255, 255];
pub const BLACK: Rgb = [0, 0, 0];
pub const RED: Rgb = [255, 0, 0];
pub const BLUE: Rgb = [0, 0, 255];

/// A cell-resolution pixel buffer, row 0 at the top.
struct Raster {
    width: usize,
    height: usize,
    cells: Vec<Rgb>,
}

impl Raster {
    fn filled(width: usize, height: usize, color: Rgb) -> Self {
        Raster {
            width,
            height,
            cells: vec![color; width * height],
        }
    }

    /// Paints the cell at game coordinates (x, y), flipping y so the origin
    /// lands at the lower-left.
    fn paint(&mut self, x: i64, y: i64, color: Rgb) {
        if x < 0 || y < 0 || x as usize >= self.width || y as usize >= self.height {
            return;
        }
        let row = self.height - 1 - y as usize;
        self.cells[row * self.width + x as usize] = color;
    }

    fn write(&self, path: &Path, zoom: u32) -> Result<(), RenderError> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
            .unwrap_or_default();
        match ext.as_str() {
            "ppm" => self.write_ppm(path, zoom),
            "svg" => self.write_svg(path, zoom),
            other => Err(RenderError::UnknownFormat(other.to_string())),
        }
    }

    fn write_ppm(&self, path: &Path, zoom: u32) -> Result<(), RenderError> {
        let zoom = zoom.max(1) as usize;
        let mut out = BufWriter::new(File::create(path)?);
        write!(
            out,
            "P6\n{} {}\n255\n",
            self.width * zoom,
            self.height * zoom
        )?;
        let mut row_buf = Vec::with_capacity(self.width * zoom * 3);
        for row in 0..self.height {
            row_buf.clear();
            for col in 0..self.width {
                let px = self.cells[row * self.width + col];
                for _ in 0..zoom {
                    row_buf.extend_from_slice(&px);
                }
            }
            for _ in 0..zoom {
                out.write_all(&row_buf)?;
            }
        }
        out.flush()?;
        Ok(())
    }

    fn write_svg(&self, path: &Path, zoom: u32) -> Result<(), RenderError> {
        let zoom = zoom.max(1) as usize;
        let mut out = BufWriter::new(File::create(path)?);
        writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" shape-rendering=\"crispEdges\">",
            self.width * zoom,
            self.height * zoom
        )?;
        writeln!(
            out,
            "<rect width=\"100%\" height=\"100%\" fill=\"{}\"/>",
            hex(WHITE)
        )?;
        for row in 0..self.height {
            for col in 0..self.width {
                let px = self.cells[row * self.width + col];
                if px == WHITE {
                    continue;
                }
                writeln!(
                    out,
                    "<rect x=\"{}\" y=\"{}\" width=\"{zoom}\" height=\"{zoom}\" fill=\"{}\"/>",
                    col * zoom,
                    row * zoom,
                    hex(px)
                )?;
            }
        }
        writeln!(out, "</svg>")?;
        out.flush()?;
        Ok(())
    }
}

fn hex(c: Rgb) -> String {
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// Writes a label grid: P cells dark, N cells light.
pub fn render_grid(grid: &LabelGrid, path: &Path, zoom: u32) -> Result<(), RenderError> {
    let mut raster = Raster::filled(grid.width() as usize, grid.height() as usize, WHITE);
    for y in 0..grid.height() {
        for x in 0..grid.width() {
            if grid.label(x, y) == Label::P {
                raster.paint(x, y, BLACK);
            }
        }
    }
    raster.write(path, zoom)
}

/// Writes the difference of two point sets over [0, w) × [0, h): points of
/// both sets black, A-only red, B-only blue, background white.
pub fn render_diff(
    a: &BTreeSet<Point>,
    b: &BTreeSet<Point>,
    extent: (i64, i64),
    path: &Path,
    zoom: u32,
) -> Result<(), RenderError> {
    let (w, h) = extent;
    assert!(w >= 1 && h >= 1, "extent must be at least 1x1");
    let mut raster = Raster::filled(w as usize, h as usize, WHITE);
    for &(x, y) in a.iter() {
        let color = if b.contains(&(x, y)) { BLACK } else { RED };
        raster.paint(x, y, color);
    }
    for &(x, y) in b.difference(a) {
        raster.paint(x, y, BLUE);
    }
    raster.write(path, zoom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Alteration, Position, RuleSet};
    use crate::oracle::oracle_labels;

    /// Minimal P6 reader for round-trip assertions.
    fn read_ppm(path: &Path) -> (usize, usize, Vec<Rgb>) {
        let data = std::fs::read(path).unwrap();
        let header_end = data
            .windows(1)
            .enumerate()
            .filter(|(_, w)| w[0] == b'\n')
            .map(|(i, _)| i)
            .nth(2)
            .unwrap();
        let header = std::str::from_utf8(&data[..header_end]).unwrap();
        let mut parts = header.split_ascii_whitespace();
        assert_eq!(parts.next(), Some("P6"));
        let w: usize = parts.next().unwrap().parse().unwrap();
        let h: usize = parts.next().unwrap().parse().unwrap();
        assert_eq!(parts.next(), Some("255"));
        let body = &data[header_end + 1..];
        assert_eq!(body.len(), w * h * 3);
        let pixels = body.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
        (w, h, pixels)
    }

    fn count(pixels: &[Rgb], color: Rgb) -> usize {
        pixels.iter().filter(|&&p| p == color).count()
    }

    #[test]
    fn grid_orientation_is_lower_left() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("grid.ppm");
        let grid = oracle_labels(&RuleSet::wythoff(), &Alteration::empty(), 2, 2);
        render_grid(&grid, &path, 1).unwrap();
        let (w, h, px) = read_ppm(&path);
        assert_eq!((w, h), (2, 2));
        // P cell (0,0) must be the bottom-left pixel, i.e. start of row 1.
        assert_eq!(px[2], BLACK);
        assert_eq!(px[0], WHITE);
        assert_eq!(px[1], WHITE);
        assert_eq!(px[3], WHITE);
    }

    #[test]
    fn diff_pixel_counts_match_set_algebra() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("diff.ppm");
        let a: BTreeSet<Point> = [(0, 0), (1, 2), (5, 5), (9, 0)].into_iter().collect();
        let b: BTreeSet<Point> = [(1, 2), (5, 5), (0, 3), (20, 20)].into_iter().collect();
        let extent = (10, 10);
        render_diff(&a, &b, extent, &path, 1).unwrap();
        let (_, _, px) = read_ppm(&path);
        let inside = |s: &BTreeSet<Point>| s.iter().filter(|(x, y)| *x < 10 && *y < 10).count();
        let both = a
            .intersection(&b)
            .filter(|(x, y)| *x < 10 && *y < 10)
            .count();
        assert_eq!(count(&px, BLACK), both);
        assert_eq!(count(&px, RED), inside(&a) - both);
        assert_eq!(count(&px, BLUE), inside(&b) - both);
        assert_eq!(count(&px, WHITE), 100 - inside(&a) - inside(&b) + both);
    }

    #[test]
    fn identical_sets_have_no_colored_pixels() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("same.ppm");
        let a: BTreeSet<Point> = [(0, 0), (3, 3)].into_iter().collect();
        render_diff(&a, &a, (5, 5), &path, 1).unwrap();
        let (_, _, px) = read_ppm(&path);
        assert_eq!(count(&px, RED), 0);
        assert_eq!(count(&px, BLUE), 0);
        assert_eq!(count(&px, BLACK), 2);
    }

    #[test]
    fn natural_game_grid_layout() {
        // Piles up to size 20: beams of P cells fanning out from a black
        // origin pixel in the lower-left corner.
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("natural21.ppm");
        let grid = oracle_labels(&RuleSet::wythoff(), &Alteration::empty(), 21, 21);
        render_grid(&grid, &path, 1).unwrap();
        let (w, h, px) = read_ppm(&path);
        assert_eq!((w, h), (21, 21));
        assert_eq!(count(&px, BLACK), grid.p_positions().count());
        assert_eq!(px[(h - 1) * w], BLACK, "origin pixel");
        assert_eq!(px[0], WHITE, "top-left pixel");
    }

    #[test]
    fn altered_vs_natural_diff_is_red_blue_balanced() {
        // Each divergence event swaps which game takes the lower beam, so
        // the difference image holds equally many red and blue cells.
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("diff300.ppm");
        let blocked = Alteration::new(
            [Position::new(0, 0)],
            (0..3)
                .flat_map(|x| (0..3).map(move |y| Position::new(x, y)))
                .filter(|p| *p != Position::new(0, 0)),
        )
        .unwrap();
        let wythoff = RuleSet::wythoff();
        let a: BTreeSet<Point> = oracle_labels(&wythoff, &blocked, 300, 300)
            .p_positions()
            .map(Position::point)
            .collect();
        let b: BTreeSet<Point> = oracle_labels(&wythoff, &Alteration::empty(), 300, 300)
            .p_positions()
            .map(Position::point)
            .collect();
        render_diff(&a, &b, (300, 300), &path, 1).unwrap();
        let (_, _, px) = read_ppm(&path);
        let red = count(&px, RED);
        assert_eq!(red, count(&px, BLUE));
        assert!(red > 0, "the games do differ");
        assert_eq!(count(&px, BLACK), a.intersection(&b).count());
    }

    #[test]
    fn zoom_scales_pixels() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("zoom.ppm");
        let grid = oracle_labels(&RuleSet::wythoff(), &Alteration::empty(), 3, 3);
        render_grid(&grid, &path, 4).unwrap();
        let (w, h, px) = read_ppm(&path);
        assert_eq!((w, h), (12, 12));
        assert_eq!(count(&px, BLACK), 3 * 16);
    }

    #[test]
    fn svg_output_lists_rectangles() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("grid.svg");
        let grid = oracle_labels(&RuleSet::wythoff(), &Alteration::empty(), 5, 5);
        render_grid(&grid, &path, 1).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("<svg"));
        let p_cells = grid.p_positions().count();
        // one background rect plus one per painted cell
        assert_eq!(text.matches("<rect").count(), p_cells + 1);
    }

    #[test]
    fn unknown_extension_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("grid.png");
        let grid = oracle_labels(&RuleSet::wythoff(), &Alteration::empty(), 2, 2);
        assert!(matches!(
            render_grid(&grid, &path, 1),
            Err(RenderError::UnknownFormat(_))
        ));
    }
}
