#pragma once

#include "ncfield/corpus.hpp"
#include "ncfield/errors.hpp"
#include "ncfield/evaluate.hpp"
#include "ncfield/exact_matrix.hpp"
#include "ncfield/freegroup.hpp"
#include "ncfield/hollow.hpp"
#include "ncfield/io.hpp"
#include "ncfield/model.hpp"
#include "ncfield/ncmatrix.hpp"
#include "ncfield/ncpoly.hpp"
#include "ncfield/ncrank.hpp"
#include "ncfield/randmat.hpp"
#include "ncfield/ratexpr.hpp"
#include "ncfield/realization.hpp"
#include "ncfield/scalar.hpp"
#include "ncfield/spectra.hpp"
