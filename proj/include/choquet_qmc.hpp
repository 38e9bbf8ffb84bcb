#pragma once

#include "choquet_qmc/bounds.hpp"
#include "choquet_qmc/choquet.hpp"
#include "choquet_qmc/compare.hpp"
#include "choquet_qmc/discrepancy.hpp"
#include "choquet_qmc/distortion.hpp"
#include "choquet_qmc/errors.hpp"
#include "choquet_qmc/expression.hpp"
#include "choquet_qmc/integrand.hpp"
#include "choquet_qmc/pointset.hpp"
