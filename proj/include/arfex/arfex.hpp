#ifndef ARFEX_ARFEX_HPP
#define ARFEX_ARFEX_HPP

#include "arfex/blobs.hpp"
#include "arfex/database.hpp"
#include "arfex/draw.hpp"
#include "arfex/error.hpp"
#include "arfex/features.hpp"
#include "arfex/geometry.hpp"
#include "arfex/image.hpp"
#include "arfex/image_io.hpp"
#include "arfex/json_io.hpp"
#include "arfex/matching.hpp"

#endif  // ARFEX_ARFEX_HPP
