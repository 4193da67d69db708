#pragma once

#include "pstab/errors.hpp"
#include "pstab/rational.hpp"
#include "pstab/index_set.hpp"
#include "pstab/matrix.hpp"
#include "pstab/compound.hpp"
#include "pstab/classify.hpp"
#include "pstab/nest.hpp"
#include "pstab/spectra.hpp"
#include "pstab/stabilize.hpp"
