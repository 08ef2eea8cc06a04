# Components package for semigroup contour quadrature
