use serde::{Deserialize, Serialize};

use super::{ChipConfig, GridSpec};

/// Colors for cells holding 0, 1, 2 and 3 chips; larger counts use the last one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Palette(pub [[u8; 3]; 4]);

impl Default for Palette {
    fn default() -> Self {
        Palette([[0, 0, 255], [0, 255, 255], [255, 255, 0], [139, 69, 19]])
    }
}

impl Palette {
    pub fn color(&self, chips: u64) -> [u8; 3] {
        self.0[chips.min(3) as usize]
    }
}

/// Binary PPM (P6, max value 255), one pixel per cell, row 0 at the top.
pub fn render_cells(spec: &GridSpec, cells: &[u64], palette: &Palette) -> Vec<u8> {
    assert_eq!(cells.len(), spec.cells());
    let header = format!("P6\n{} {}\n255\n", spec.cols, spec.rows);
    let mut out = Vec::with_capacity(header.len() + 3 * cells.len());
    out.extend_from_slice(header.as_bytes());
    for &n in cells {
        out.extend_from_slice(&palette.color(n));
    }
    out
}

/// Renders a configuration over [`super::make_grid`]'s graph; any sink vertex is skipped.
pub fn render_ppm(spec: &GridSpec, config: &ChipConfig, palette: &Palette) -> Vec<u8> {
    render_cells(spec, &config.counts()[..spec.cells()], palette)
}

#[cfg(test)]
mod tests {
    use super::super::GridMode;
    use super::*;

    #[test]
    fn uniform_two_by_two() {
        let spec = GridSpec::new(2, 2, GridMode::Closed);
        let img = render_cells(&spec, &[0; 4], &Palette::default());
        let header = b"P6\n2 2\n255\n";
        assert_eq!(&img[..header.len()], header);
        assert_eq!(img.len(), header.len() + 12);
        assert!(img[header.len()..].chunks(3).all(|p| p == [0, 0, 255]));
    }

    #[test]
    fn counts_clamp_to_last_color() {
        let p = Palette::default();
        assert_eq!(p.color(7), p.color(3));
    }
}
