//! `GRID2` text format for finite subsets of Z^2.
//!
//! ```text
//! GRID2 x0 y0 w h
//! <h rows of w chars, '#' = member, '.' = non-member, row y0+h-1 first>
//! ```
//!
//! When a grid stands for a [`VertexSet`], it covers the dilated box of the
//! set's window, so the window is the grid shrunk by one on every side.

use std::fmt::Write as _;

use super::{Pattern, Point, VertexSet, Window};
use crate::error::{parse_err, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid2 {
    pub x0: i64,
    pub y0: i64,
    pub w: usize,
    pub h: usize,
    cells: Vec<bool>,
}

impl Grid2 {
    pub fn new(x0: i64, y0: i64, w: usize, h: usize) -> Self {
        Grid2 {
            x0,
            y0,
            w,
            h,
            cells: vec![false; w * h],
        }
    }

    pub fn from_fn(x0: i64, y0: i64, w: usize, h: usize, f: impl Fn(i64, i64) -> bool) -> Self {
        let mut g = Grid2::new(x0, y0, w, h);
        for dy in 0..h {
            for dx in 0..w {
                g.cells[dy * w + dx] = f(x0 + dx as i64, y0 + dy as i64);
            }
        }
        g
    }

    fn slot(&self, x: i64, y: i64) -> Option<usize> {
        let (dx, dy) = (x - self.x0, y - self.y0);
        (dx >= 0 && dy >= 0 && (dx as usize) < self.w && (dy as usize) < self.h)
            .then(|| dy as usize * self.w + dx as usize)
    }

    pub fn get(&self, x: i64, y: i64) -> Option<bool> {
        self.slot(x, y).map(|i| self.cells[i])
    }

    pub fn set(&mut self, x: i64, y: i64, v: bool) {
        if let Some(i) = self.slot(x, y) {
            self.cells[i] = v;
        }
    }

    pub fn bounds(&self) -> Window {
        Window::new(
            [self.x0, self.y0],
            [self.x0 + self.w as i64 - 1, self.y0 + self.h as i64 - 1],
        )
        .expect("grid is nonempty")
    }

    pub fn parse(text: &str) -> Result<Grid2> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let f: Vec<&str> = header.split_whitespace().collect();
        if f.len() != 5 || f[0] != "GRID2" {
            return Err(parse_err(hl + 1, "expected `GRID2 x0 y0 w h`"));
        }
        let num = |s: &str| {
            s.parse::<i64>()
                .map_err(|e| parse_err(hl + 1, e.to_string()))
        };
        let (x0, y0, w, h) = (num(f[1])?, num(f[2])?, num(f[3])?, num(f[4])?);
        if w <= 0 || h <= 0 {
            return Err(parse_err(hl + 1, "width and height must be positive"));
        }
        let (w, h) = (w as usize, h as usize);
        let mut g = Grid2::new(x0, y0, w, h);
        for row in 0..h {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| parse_err(hl + 2 + row, "missing grid row"))?;
            let line = line.trim_end();
            if line.chars().count() != w {
                return Err(parse_err(ln + 1, format!("expected {w} cells")));
            }
            let y = y0 + (h - 1 - row) as i64;
            for (dx, ch) in line.chars().enumerate() {
                let v = match ch {
                    '#' => true,
                    '.' => false,
                    _ => return Err(parse_err(ln + 1, format!("unexpected character `{ch}`"))),
                };
                g.set(x0 + dx as i64, y, v);
            }
        }
        if let Some((ln, _)) = lines.next() {
            return Err(parse_err(ln + 1, "trailing content after grid"));
        }
        Ok(g)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        writeln!(s, "GRID2 {} {} {} {}", self.x0, self.y0, self.w, self.h).unwrap();
        for row in (0..self.h).rev() {
            for dx in 0..self.w {
                s.push(if self.cells[row * self.w + dx] {
                    '#'
                } else {
                    '.'
                });
            }
            s.push('\n');
        }
        s
    }

    /// Grid over the dilated box of a 2-D set's window.
    pub fn from_set(set: &VertexSet) -> Result<Grid2> {
        let win = set.window();
        if win.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: win.dim(),
            });
        }
        let d = win.dilated();
        Ok(Grid2::from_fn(
            d.lo()[0],
            d.lo()[1],
            d.side(0),
            d.side(1),
            |x, y| set.get(&Point::from([x, y])),
        ))
    }

    /// The window whose dilated box is this grid.
    pub fn inner_window(&self) -> Result<Window> {
        if self.w < 3 || self.h < 3 {
            return Err(Error::Invalid(
                "grid must be at least 3x3 to carry a window and its closure".into(),
            ));
        }
        Window::new(
            [self.x0 + 1, self.y0 + 1],
            [self.x0 + self.w as i64 - 2, self.y0 + self.h as i64 - 2],
        )
    }

    pub fn to_set(&self) -> Result<VertexSet> {
        let win = self.inner_window()?;
        Ok(VertexSet::from_fn(&win, |p| {
            self.get(p[0], p[1]) == Some(true)
        }))
    }

    /// The finite pattern consisting of the grid's members.
    pub fn to_pattern(&self) -> Pattern {
        let cells = self
            .bounds()
            .points()
            .filter(|p| self.get(p[0], p[1]) == Some(true));
        Pattern::from_cells(2, cells).expect("2-D cells")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_orientation() {
        let g = Grid2::parse("GRID2 0 0 3 2\n#..\n.##\n").unwrap();
        // first row printed is y = 1
        assert_eq!(g.get(0, 1), Some(true));
        assert_eq!(g.get(1, 1), Some(false));
        assert_eq!(g.get(0, 0), Some(false));
        assert_eq!(g.get(2, 0), Some(true));
        assert_eq!(g.render(), "GRID2 0 0 3 2\n#..\n.##\n");
    }

    #[test]
    fn parse_errors() {
        assert!(Grid2::parse("").is_err());
        assert!(Grid2::parse("GRID 0 0 1 1\n#\n").is_err());
        assert!(Grid2::parse("GRID2 0 0 2 1\n#\n").is_err());
        assert!(Grid2::parse("GRID2 0 0 1 2\n#\n").is_err());
        assert!(Grid2::parse("GRID2 0 0 1 1\nx\n").is_err());
        assert!(Grid2::parse("GRID2 0 0 1 1\n#\n#\n").is_err());
    }

    #[test]
    fn set_roundtrip() {
        let win = Window::new([-2, 0], [3, 2]).unwrap();
        let s = VertexSet::from_fn(&win, |p| (p[0] + 2 * p[1]) % 3 == 0);
        let g = Grid2::from_set(&s).unwrap();
        let back = Grid2::parse(&g.render()).unwrap().to_set().unwrap();
        assert_eq!(back, s);
    }
}
