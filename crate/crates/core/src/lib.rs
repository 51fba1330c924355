//! Exact verification engine for syzygies of canonical curves.
//!
//! * [`exactla`]: exact rational linear algebra with a modular fast path.
//! * [`sl2poly`]: monomial bases for symmetric and exterior powers of a
//!   two-dimensional space, and the linear maps between them.
//! * [`hypmodel`]: the hyperelliptic model of the bundle `E`, its Petri map
//!   and explicit inverse, and the deformation kernel element.
//! * [`curvering`]: the curve `y^2 = f(x)`, its pluricanonical sections and
//!   the Wronskian connecting map.
//! * [`koszul`]: Koszul differentials, Betti tables and property `N_p`.

pub mod curvering;
pub mod error;
pub mod exactla;
pub mod hypmodel;
pub mod koszul;
pub mod poly;
pub mod report;
pub mod seed;
pub mod sl2poly;

pub use error::{Error, Result};
pub use exactla::{Matrix, ModularConfig, RankMode, Scalar};
pub use report::{Report, Verdict};
