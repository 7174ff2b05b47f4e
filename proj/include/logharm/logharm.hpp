#pragma once

#include "logharm/error.hpp"
#include "logharm/jet.hpp"
#include "logharm/expr.hpp"
#include "logharm/maps.hpp"
#include "logharm/norms.hpp"
#include "logharm/criteria.hpp"
#include "logharm/render.hpp"
#include "logharm/fixtures.hpp"
