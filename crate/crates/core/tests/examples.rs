// Every example's main, run in-process with default arguments.

trait Succeeds {
    fn succeeds(self) -> bool;
}

impl Succeeds for () {
    fn succeeds(self) -> bool {
        true
    }
}

impl<E: std::fmt::Debug> Succeeds for Result<(), E> {
    fn succeeds(self) -> bool {
        self.map_err(|e| eprintln!("{e:?}")).is_ok()
    }
}

macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!("../examples/", stringify!($name), ".rs"));

            #[test]
            fn runs() {
                assert!(super::Succeeds::succeeds(main()));
            }
        }
    };
}

example!(cusps);
example!(eta_orders);
example!(find_t);
example!(basis);
example!(u_image);
example!(t_sequence);
example!(direct_check);
example!(verify_rogers_ramanujan);
example!(verify_andrews_sellers);
