// Umbrella header.

#ifndef QDECIM_QDECIM_HPP
#define QDECIM_QDECIM_HPP

#include "qdecim/decimation.hpp"
#include "qdecim/entanglement.hpp"
#include "qdecim/evolution.hpp"
#include "qdecim/io.hpp"
#include "qdecim/numerics.hpp"
#include "qdecim/pca.hpp"
#include "qdecim/random.hpp"
#include "qdecim/stateset.hpp"

#endif  // QDECIM_QDECIM_HPP
