#pragma once

#include "dctmark/attacks.hpp"
#include "dctmark/blocks.hpp"
#include "dctmark/color.hpp"
#include "dctmark/dct.hpp"
#include "dctmark/error.hpp"
#include "dctmark/hvs.hpp"
#include "dctmark/image.hpp"
#include "dctmark/image_io.hpp"
#include "dctmark/invisible.hpp"
#include "dctmark/keystream.hpp"
#include "dctmark/metrics.hpp"
#include "dctmark/visible.hpp"
