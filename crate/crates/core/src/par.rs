//! Switch between rayon and sequential iterators.
//!
//! `if_rayon!(par, seq)` expands to `par` with the `parallel` feature and to
//! `seq` without it. Modules using it import [`prelude`].

macro_rules! if_rayon {
    ($par:expr, $seq:expr) => {{
        #[cfg(feature = "parallel")]
        {
            $par
        }
        #[cfg(not(feature = "parallel"))]
        {
            $seq
        }
    }};
}

pub(crate) mod prelude {
    #[cfg(feature = "parallel")]
    pub use rayon::prelude::*;
}
