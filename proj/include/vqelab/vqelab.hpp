// SPDX-License-Identifier: Apache-2.0
#pragma once

// Umbrella header.

#include "vqelab/ansatz.hpp"
#include "vqelab/checkpoint.hpp"
#include "vqelab/config.hpp"
#include "vqelab/csv.hpp"
#include "vqelab/escape.hpp"
#include "vqelab/exact_diag.hpp"
#include "vqelab/fdr.hpp"
#include "vqelab/gradient.hpp"
#include "vqelab/hessian.hpp"
#include "vqelab/landscape.hpp"
#include "vqelab/optimizer.hpp"
#include "vqelab/parallel.hpp"
#include "vqelab/pauli.hpp"
#include "vqelab/power_law.hpp"
#include "vqelab/rng.hpp"
#include "vqelab/sampling.hpp"
#include "vqelab/state_vector.hpp"
