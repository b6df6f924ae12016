/**********************************************************************
 * Copyright (c) 2013, 2014 Pieter Wuille                             *
 **********************************************************************/
