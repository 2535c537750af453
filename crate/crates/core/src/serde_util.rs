use serde::Serializer;

use crate::arith::Rational;

pub(crate) fn rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}
