//! Shared fixtures for the kernel benchmarks.

use padic_casimir::padic_tower::build_tower;
use padic_casimir::pvalued_groups::{build_group_context, GroupCase, GroupContext};

pub fn q3() -> GroupContext {
    build_group_context(GroupCase::Gl2, &build_tower(3, &[0, 1], &[vec![-3], vec![1]], None).unwrap()).unwrap()
}

pub fn q9() -> GroupContext {
    build_group_context(GroupCase::Gl2, &build_tower(3, &[1, 0, 1], &[vec![-3], vec![1]], None).unwrap()).unwrap()
}

pub fn sqrt3() -> GroupContext {
    build_group_context(GroupCase::Gl2, &build_tower(3, &[0, 1], &[vec![-3], vec![0], vec![1]], None).unwrap()).unwrap()
}
