# Experiment commands for the semigroup contour-quadrature toolkit
