#pragma once

#include "fractrans/error.hpp"
#include "fractrans/settings.hpp"
#include "fractrans/geometry.hpp"
#include "fractrans/raster.hpp"
#include "fractrans/parallel.hpp"
#include "fractrans/random.hpp"
#include "fractrans/ifs.hpp"
#include "fractrans/sections.hpp"
#include "fractrans/picture.hpp"
#include "fractrans/transform.hpp"
#include "fractrans/imaging.hpp"
#include "fractrans/render.hpp"
#include "fractrans/config.hpp"
