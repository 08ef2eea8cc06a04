# Utils package for semigroup contour quadrature
