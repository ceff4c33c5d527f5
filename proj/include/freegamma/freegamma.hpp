#pragma once

#include "freegamma/errors.hpp"
#include "freegamma/special.hpp"
#include "freegamma/quad.hpp"
#include "freegamma/landscape.hpp"
#include "freegamma/density.hpp"
#include "freegamma/moments.hpp"
#include "freegamma/transforms.hpp"
#include "freegamma/verify.hpp"
