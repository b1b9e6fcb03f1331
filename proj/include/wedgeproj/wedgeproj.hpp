#pragma once

#include "wedgeproj/core.hpp"
#include "wedgeproj/isotone.hpp"
#include "wedgeproj/monotone.hpp"
#include "wedgeproj/projection.hpp"
#include "wedgeproj/wedge.hpp"
