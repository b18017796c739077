//! Layout of the fingertip electrode array.
//!
//! The array is a 6x6 grid with the four corner positions unpopulated,
//! leaving 32 active electrodes. Cells are addressed as `(row, col)` with
//! row 0 at the distal end (towards the fingertip) and columns increasing
//! to the right when viewing the array through the finger pad with
//! `forward` up. Active electrodes carry ids 0..32 assigned row-major,
//! skipping the excluded corners.

use crate::alloc::vec::Vec;

/// Grid side length in cells.
pub const GRID_SIDE: usize = 6;
/// Total lattice positions including the four excluded corners.
pub const GRID_CELLS: usize = GRID_SIDE * GRID_SIDE;
/// Number of populated electrodes.
pub const ACTIVE_ELECTRODES: usize = 32;
/// Centre-to-centre electrode spacing in millimetres.
pub const ELECTRODE_SPACING_MM: f64 = 2.0;
/// Electrode contact diameter in millimetres.
pub const ELECTRODE_DIAMETER_MM: f64 = 1.4;
/// Number of calibration regions (3x3 blocks of 2x2 cells).
pub const CALIBRATION_REGIONS: usize = 9;
/// Index of the central calibration region.
pub const CENTER_REGION: usize = 4;

const fn bit(row: usize, col: usize) -> u64 {
    1u64 << (row * GRID_SIDE + col)
}

/// Bitmask of the four excluded corner cells.
pub const CORNER_MASK: u64 = bit(0, 0) | bit(0, GRID_SIDE - 1) | bit(GRID_SIDE - 1, 0) | bit(GRID_SIDE - 1, GRID_SIDE - 1);

/// Bitmask of all 36 lattice cells.
pub const FULL_MASK: u64 = (1u64 << GRID_CELLS) - 1;

/// Bitmask of the 32 populated cells.
pub const ACTIVE_MASK: u64 = FULL_MASK & !CORNER_MASK;

/// True if `(row, col)` is one of the four unpopulated corners.
pub fn is_excluded_corner(row: usize, col: usize) -> bool {
    (row == 0 || row == GRID_SIDE - 1) && (col == 0 || col == GRID_SIDE - 1)
}

/// Electrode id (0..32) for an active cell, or `None` for excluded corners.
pub fn electrode_id(row: usize, col: usize) -> Option<u8> {
    if row >= GRID_SIDE || col >= GRID_SIDE || is_excluded_corner(row, col) {
        return None;
    }
    let mut id = 0u8;
    for r in 0..GRID_SIDE {
        for c in 0..GRID_SIDE {
            if is_excluded_corner(r, c) {
                continue;
            }
            if r == row && c == col {
                return Some(id);
            }
            id += 1;
        }
    }
    None
}

/// Cell coordinates of an electrode id (inverse of [`electrode_id`]).
pub fn electrode_cell(id: u8) -> Option<(usize, usize)> {
    if usize::from(id) >= ACTIVE_ELECTRODES {
        return None;
    }
    let mut n = 0u8;
    for r in 0..GRID_SIDE {
        for c in 0..GRID_SIDE {
            if is_excluded_corner(r, c) {
                continue;
            }
            if n == id {
                return Some((r, c));
            }
            n += 1;
        }
    }
    None
}

/// Calibration region (0..9) of a cell: the array divides into a 3x3 grid
/// of 2x2 blocks, numbered row-major. Region 4 is the centre block.
pub fn region_of_cell(row: usize, col: usize) -> usize {
    (row / 2) * 3 + (col / 2)
}

/// Calibration region of an electrode id.
pub fn region_of_electrode(id: u8) -> Option<usize> {
    electrode_cell(id).map(|(r, c)| region_of_cell(r, c))
}

/// Physical centre of a cell in pad-local millimetres, with the array
/// centre at the origin, x along `right` and y along `forward`.
pub fn cell_center_mm(row: usize, col: usize) -> (f64, f64) {
    let half = (GRID_SIDE as f64 - 1.0) / 2.0;
    let x = (col as f64 - half) * ELECTRODE_SPACING_MM;
    let y = (half - row as f64) * ELECTRODE_SPACING_MM;
    (x, y)
}

/// Set of lattice cells as a 36-bit mask. Bit `row * 6 + col`.
///
/// A lattice may include the excluded corner cells; masking down to the
/// populated electrodes happens when a pattern is read out, so that
/// translations behave as rigid motions of the ideal 6x6 grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Lattice(pub u64);

impl Lattice {
    pub const EMPTY: Lattice = Lattice(0);

    pub fn contains(self, row: usize, col: usize) -> bool {
        row < GRID_SIDE && col < GRID_SIDE && self.0 & bit(row, col) != 0
    }

    pub fn insert(&mut self, row: usize, col: usize) {
        debug_assert!(row < GRID_SIDE && col < GRID_SIDE);
        self.0 |= bit(row, col);
    }

    pub fn count(self) -> u32 {
        self.0.count_ones()
    }

    /// Restrict to the 32 populated cells.
    pub fn masked(self) -> Lattice {
        Lattice(self.0 & ACTIVE_MASK)
    }

    /// Translate by `(d_row, d_col)`; cells leaving the grid are dropped.
    pub fn shift_clip(self, d_row: i32, d_col: i32) -> Lattice {
        let mut out = Lattice::EMPTY;
        for row in 0..GRID_SIDE {
            for col in 0..GRID_SIDE {
                if !self.contains(row, col) {
                    continue;
                }
                let nr = row as i32 + d_row;
                let nc = col as i32 + d_col;
                if (0..GRID_SIDE as i32).contains(&nr) && (0..GRID_SIDE as i32).contains(&nc) {
                    out.insert(nr as usize, nc as usize);
                }
            }
        }
        out
    }

    /// Translate by `(d_row, d_col)` with toroidal wrap-around.
    pub fn shift_wrap(self, d_row: i32, d_col: i32) -> Lattice {
        let side = GRID_SIDE as i32;
        let mut out = Lattice::EMPTY;
        for row in 0..GRID_SIDE {
            for col in 0..GRID_SIDE {
                if !self.contains(row, col) {
                    continue;
                }
                let nr = (row as i32 + d_row).rem_euclid(side);
                let nc = (col as i32 + d_col).rem_euclid(side);
                out.insert(nr as usize, nc as usize);
            }
        }
        out
    }

    /// Iterator over set cells in row-major order.
    pub fn cells(self) -> impl Iterator<Item = (usize, usize)> {
        let mask = self.0;
        (0..GRID_CELLS).filter_map(move |i| {
            if mask & (1u64 << i) != 0 {
                Some((i / GRID_SIDE, i % GRID_SIDE))
            } else {
                None
            }
        })
    }

    /// Activation of the 32 populated electrodes, indexed by electrode id.
    pub fn electrode_activation(self) -> [bool; ACTIVE_ELECTRODES] {
        let masked = self.masked();
        let mut out = [false; ACTIVE_ELECTRODES];
        let mut id = 0usize;
        for r in 0..GRID_SIDE {
            for c in 0..GRID_SIDE {
                if is_excluded_corner(r, c) {
                    continue;
                }
                out[id] = masked.contains(r, c);
                id += 1;
            }
        }
        out
    }

    /// 36-character row-major rendering: `#` for set cells (corners always
    /// reported unset), `.` otherwise.
    pub fn grid_string(self) -> crate::alloc::string::String {
        let masked = self.masked();
        let mut s = crate::alloc::string::String::with_capacity(GRID_CELLS);
        for r in 0..GRID_SIDE {
            for c in 0..GRID_SIDE {
                s.push(if masked.contains(r, c) { '#' } else { '.' });
            }
        }
        s
    }
}

/// All `(row, col)` active cells in electrode-id order.
pub fn active_cells() -> Vec<(usize, usize)> {
    let mut v = Vec::with_capacity(ACTIVE_ELECTRODES);
    for r in 0..GRID_SIDE {
        for c in 0..GRID_SIDE {
            if !is_excluded_corner(r, c) {
                v.push((r, c));
            }
        }
    }
    v
}
