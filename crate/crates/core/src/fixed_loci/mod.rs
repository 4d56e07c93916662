//! Torus-fixed components of `M(2,-1,k)` and the decorated character tables of
//! `U_i = H¹(E(i-2))` over them.

mod component;
mod corner;
mod sides;
mod table;

pub use component::{
    assemble_components, assemble_components_with, complement, hexagon_table, normalization_shift,
    shift_from_sums, torsion_table, u_table, EnumerationOptions, FixedComponent,
};
pub use corner::{
    corner_configs, partitions, Cell, ClassTag, CornerConfig, LineClass, TorsionRoot,
};
pub use sides::{chern_from_data, side_triples, SideTriple};
pub use table::{DecoratedTable, DivClass};

/// Global orientation of the character lattice relative to the weights of `V`.
///
/// The pictures fix conventions only up to a lattice reflection. `Reflected`
/// negates the weights of the fixed modules `V` and `Λ²V`, which is the same
/// as negating every character of the `U_i` tables.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Orientation {
    #[default]
    Standard,
    Reflected,
}

/// The orientation under which every component at `k = 2..5` has an `Ext¹`
/// zero-weight part of rank `N`. The reflected one fails already at `k = 2`.
pub const CALIBRATED_ORIENTATION: Orientation = Orientation::Standard;

impl Orientation {
    pub fn from_reflect_flag(reflect: bool) -> Self {
        if reflect {
            Orientation::Reflected
        } else {
            Orientation::Standard
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Orientation::Standard => 1,
            Orientation::Reflected => -1,
        }
    }
}
