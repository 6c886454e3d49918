#ifndef CURVPCA_CURVPCA_HPP
#define CURVPCA_CURVPCA_HPP

#include "curvpca/asymptotics.hpp"
#include "curvpca/convergence.hpp"
#include "curvpca/descriptors.hpp"
#include "curvpca/domains.hpp"
#include "curvpca/errors.hpp"
#include "curvpca/models.hpp"
#include "curvpca/point_cloud_io.hpp"
#include "curvpca/quadrature.hpp"
#include "curvpca/rng.hpp"
#include "curvpca/sphere_integrals.hpp"
#include "curvpca/submanifold.hpp"

#endif // CURVPCA_CURVPCA_HPP
