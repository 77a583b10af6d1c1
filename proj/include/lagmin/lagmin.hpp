#pragma once

#include "lagmin/biharmonic.hpp"
#include "lagmin/cycle.hpp"
#include "lagmin/error.hpp"
#include "lagmin/geom_core.hpp"
#include "lagmin/isotropic.hpp"
#include "lagmin/json_io.hpp"
#include "lagmin/mesh.hpp"
#include "lagmin/pencils.hpp"
#include "lagmin/reconstruct.hpp"
#include "lagmin/spec_parse.hpp"
#include "lagmin/surfaces.hpp"
#include "lagmin/taylor.hpp"
#include "lagmin/verify.hpp"
