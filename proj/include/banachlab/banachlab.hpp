#pragma once

#include "banachlab/abelian_group.hpp"   // IWYU pragma: export
#include "banachlab/building.hpp"        // IWYU pragma: export
#include "banachlab/cocycle.hpp"         // IWYU pragma: export
#include "banachlab/coefficient_space.hpp"  // IWYU pragma: export
#include "banachlab/errors.hpp"          // IWYU pragma: export
#include "banachlab/expander.hpp"        // IWYU pragma: export
#include "banachlab/fourier.hpp"         // IWYU pragma: export
#include "banachlab/inequality.hpp"      // IWYU pragma: export
#include "banachlab/laurent.hpp"         // IWYU pragma: export
#include "banachlab/operator_matrix.hpp" // IWYU pragma: export
#include "banachlab/report.hpp"          // IWYU pragma: export
#include "banachlab/residue.hpp"         // IWYU pragma: export
#include "banachlab/rng.hpp"             // IWYU pragma: export
#include "banachlab/tensor_norm.hpp"     // IWYU pragma: export
#include "banachlab/type_constant.hpp"   // IWYU pragma: export
