#pragma once

#include "speclab/version.hpp"
#include "speclab/types.hpp"
#include "speclab/rng.hpp"
#include "speclab/parallel.hpp"
#include "speclab/linalg.hpp"
#include "speclab/instability.hpp"
#include "speclab/models.hpp"
#include "speclab/stats.hpp"
#include "speclab/geometry.hpp"
#include "speclab/eigenvectors.hpp"
#include "speclab/pseudospectrum.hpp"
#include "speclab/sha256.hpp"
#include "speclab/io.hpp"
#include "speclab/manifest.hpp"
#include "speclab/config.hpp"
#include "speclab/commands.hpp"
