"""The brute-force local refuter over ℓ-sized variable sets."""

from .refute import SimpleVariant, simple_constant, simple_refute, subset_buckets
