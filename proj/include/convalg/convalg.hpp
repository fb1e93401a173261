#pragma once

#include "convalg/bipartite.hpp"
#include "convalg/channels.hpp"
#include "convalg/errors.hpp"
#include "convalg/io.hpp"
#include "convalg/linalg.hpp"
#include "convalg/random.hpp"
#include "convalg/superop.hpp"
