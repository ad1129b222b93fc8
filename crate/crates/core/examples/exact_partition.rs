//! Exact partition functions, in floating point and as rationals.
//!
//!     cargo run --example exact_partition

use hypercount::exact::{exact_partition, independence_polynomial, partition_rational, DEFAULT_MAX_VERTICES};
use hypercount::format::parse_hypergraph;
use hypercount::{ActivityVector, Pinning};
use num::{BigInt, BigRational};

fn main() {
    let fano = parse_hypergraph(include_str!("data/fano.hg")).unwrap();

    let poly = independence_polynomial(&fano, DEFAULT_MAX_VERTICES).unwrap();
    println!("independent sets by size: {poly:?}");

    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    println!("Z(1/2) = {}", partition_rational(&fano, &half, DEFAULT_MAX_VERTICES).unwrap());

    let r = exact_partition(&fano, &ActivityVector::uniform(0.5).unwrap(), &Pinning::new()).unwrap();
    println!("Z(0.5) = {}, P(point 0 occupied) = {:.6}", r.partition, r.marginal(0));
}
