#pragma once

// Umbrella header: the whole library.

#include "admissible.hpp"
#include "cardinal.hpp"
#include "classify.hpp"
#include "cyclerep.hpp"
#include "errors.hpp"
#include "extension.hpp"
#include "fields.hpp"
#include "filtration.hpp"
#include "generators.hpp"
#include "invariant_factors.hpp"
#include "matrix.hpp"
#include "ordinal.hpp"
#include "polynomial.hpp"
#include "rational_form.hpp"
#include "repio.hpp"
#include "rng.hpp"
#include "selfcheck.hpp"
#include "subspace.hpp"
#include "terminal.hpp"
#include "text_io.hpp"
