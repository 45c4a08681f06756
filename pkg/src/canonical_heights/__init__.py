# canonical_heights package
