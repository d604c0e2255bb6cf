#pragma once

// Everything at once, for tools and quick experiments.

#include "filtergames/upset.hpp"
#include "filtergames/gridset.hpp"
#include "filtergames/sequence.hpp"
#include "filtergames/filters.hpp"
#include "filtergames/family.hpp"
#include "filtergames/games.hpp"
#include "filtergames/certify.hpp"
#include "filtergames/strategies.hpp"
#include "filtergames/witnesses.hpp"
#include "filtergames/refuters.hpp"
#include "filtergames/transforms.hpp"
#include "filtergames/trees.hpp"
#include "filtergames/extract.hpp"
#include "filtergames/specs.hpp"
#include "filtergames/report.hpp"
