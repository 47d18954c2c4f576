//! Exact polynomials over the rationals and the polynomial families built
//! from them: the occupation-time moment polynomials `P_n(x, z)` (by
//! recurrence and by closed forms), Bessel polynomials and Chebyshev
//! polynomials.

mod bi;
mod families;
mod uni;

pub use bi::BiPoly;
pub use families::{
    bessel_poly, chebyshev_t, pn_closed_form, pn_recurrence, pn_recurrence_at, pn_skew_bm,
    pn_via_chebyshev, pn_z_minus2, pn_z_one, reverse_bessel_poly,
};
pub use uni::UniPoly;
