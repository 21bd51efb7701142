#pragma once

#include "regenc/errors.hpp"
#include "regenc/word.hpp"
#include "regenc/automata.hpp"
#include "regenc/enumerate.hpp"
#include "regenc/imageset.hpp"
#include "regenc/encodings.hpp"
#include "regenc/inject.hpp"
#include "regenc/bijectify.hpp"
#include "regenc/numrep.hpp"
